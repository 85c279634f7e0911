//! Textual scheme parameters: `m=6,l=2,b=2,La=2,u=32,v=8`. Entries may be
//! separated by commas or newlines.

use std::fs;
use std::path::Path;

use fragmark_core::SchemeParams;

use crate::error::{Error, Result};

pub fn parse_params(text: &str) -> Result<SchemeParams> {
    let mut fields: [Option<usize>; 6] = [None; 6];
    for entry in text.split([',', '\n']).map(str::trim).filter(|e| !e.is_empty()) {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Params(format!("expected key=value, got `{entry}`")))?;
        let idx = match key.trim() {
            "m" => 0,
            "l" => 1,
            "b" => 2,
            "La" | "la" => 3,
            "u" => 4,
            "v" => 5,
            other => return Err(Error::Params(format!("unknown key `{other}`"))),
        };
        let n = value
            .trim()
            .parse()
            .map_err(|_| Error::Params(format!("`{}` is not a number", value.trim())))?;
        if fields[idx].replace(n).is_some() {
            return Err(Error::Params(format!("duplicate key `{}`", key.trim())));
        }
    }
    match fields {
        [Some(m), Some(l), Some(b), Some(la), Some(u), Some(v)] => {
            Ok(SchemeParams::new(m, l, b, la, u, v))
        }
        _ => Err(Error::Params("m, l, b, La, u and v are all required".into())),
    }
}

pub fn load_params(path: impl AsRef<Path>) -> Result<SchemeParams> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_params(&text)
}

/// Parses a mode string such as `6,2`.
pub fn parse_mode(text: &str) -> Result<(usize, usize)> {
    let (m, l) = text
        .split_once(',')
        .ok_or_else(|| Error::Params(format!("mode `{text}` must look like m,l")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Params(format!("mode `{text}` must look like m,l")))
    };
    Ok((num(m)?, num(l)?))
}
