//! Binary PGM (P5, maxval 255) input/output and PBM (P4) verdict masks.

use std::fs;
use std::path::Path;

use fragmark_core::{DetectionMap, GrayImage};

use crate::error::{Error, Result};

/// Parses a binary PGM. Header whitespace and `#` comments are accepted;
/// only maxval 255 is supported.
pub fn decode_pgm(data: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { data, pos: 0 };
    match data.get(..2) {
        Some(b"P5") => cur.pos = 2,
        Some(m) if m.first() == Some(&b'P') => {
            return Err(Error::MalformedPgm(format!(
                "unsupported variant {}",
                String::from_utf8_lossy(m)
            )))
        }
        _ => return Err(Error::MalformedPgm("missing P5 magic".into())),
    }
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if maxval != 255 {
        return Err(Error::MalformedPgm(format!(
            "maxval {maxval} is not supported (expected 255)"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::MalformedPgm("zero-sized image".into()));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match cur.data.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::MalformedPgm("header not terminated".into())),
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedPgm("dimensions overflow".into()))?;
    let raster = &data[cur.pos..];
    if raster.len() < need {
        return Err(Error::MalformedPgm(format!(
            "truncated payload: {} of {need} bytes",
            raster.len()
        )));
    }
    Ok(GrayImage::new(width, height, raster[..need].to_vec())?)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedPgm(format!("bad or missing {what}")))
    }
}

/// Serializes with the plain header `P5\n<w> <h>\n255\n`.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

/// Reads a binary PGM from disk.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&data)
}

pub fn save_image(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(|e| Error::io(path, e))
}

/// One PBM pixel per block; 1 (black) marks a tampered block.
pub fn encode_pbm_mask(map: &DetectionMap) -> Vec<u8> {
    let (w, h) = (map.blocks_x(), map.blocks_y());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    for y in 0..h {
        let mut row = vec![0u8; row_bytes];
        for x in 0..w {
            if map.is_tampered(y * w + x) {
                row[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

pub fn save_mask(path: impl AsRef<Path>, map: &DetectionMap) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pbm_mask(map)).map_err(|e| Error::io(path, e))
}
