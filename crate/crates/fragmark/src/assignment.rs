//! Block-assignment files for the collage command: one line per block row,
//! whitespace-separated donor indices, `#` starts a comment.

use std::fs;
use std::path::Path;

use fragmark_core::RegionAssignment;

use crate::error::{Error, Result};

pub fn parse_assignment(text: &str) -> Result<RegionAssignment> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Assignment(format!("line {}: `{t}` is not an index", n + 1)))
            })
            .collect::<Result<Vec<usize>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Assignment(format!(
                    "line {}: {} entries, expected {}",
                    n + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let blocks_y = rows.len();
    let blocks_x = rows.first().map_or(0, Vec::len);
    Ok(RegionAssignment::new(
        blocks_x,
        blocks_y,
        rows.into_iter().flatten().collect(),
    )?)
}

pub fn load_assignment(path: impl AsRef<Path>) -> Result<RegionAssignment> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_assignment(&text)
}
