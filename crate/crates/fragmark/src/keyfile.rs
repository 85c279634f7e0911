//! Key files: three `role=<64 hex digits>` lines.
//!
//! ```text
//! scramble=<64 hex>
//! matrix=<64 hex>
//! embed=<64 hex>
//! ```

use std::fs;
use std::path::Path;

use fragmark_core::{KeySet, Seed};
use rand::rngs::OsRng;
use rand::TryRngCore;

use crate::error::{Error, Result};

pub fn parse_keys(text: &str) -> Result<KeySet> {
    let (mut scramble, mut matrix, mut embed) = (None, None, None);
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (role, value) = line
            .split_once('=')
            .ok_or_else(|| Error::KeyFile(format!("line {}: expected role=hex", n + 1)))?;
        let seed = Seed::from_hex(value)
            .map_err(|_| Error::KeyFile(format!("line {}: expected 64 hex digits", n + 1)))?;
        let slot = match role.trim() {
            "scramble" => &mut scramble,
            "matrix" => &mut matrix,
            "embed" => &mut embed,
            other => return Err(Error::KeyFile(format!("unknown role `{other}`"))),
        };
        if slot.replace(seed).is_some() {
            return Err(Error::KeyFile(format!("duplicate role `{}`", role.trim())));
        }
    }
    match (scramble, matrix, embed) {
        (Some(s), Some(m), Some(e)) => Ok(KeySet::new(s, m, e)),
        _ => Err(Error::KeyFile(
            "scramble, matrix and embed must all be present".into(),
        )),
    }
}

pub fn format_keys(keys: &KeySet) -> String {
    format!(
        "scramble={}\nmatrix={}\nembed={}\n",
        keys.scramble.to_hex(),
        keys.matrix.to_hex(),
        keys.embed.to_hex()
    )
}

pub fn load_keys(path: impl AsRef<Path>) -> Result<KeySet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_keys(&text)
}

pub fn save_keys(path: impl AsRef<Path>, keys: &KeySet) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_keys(keys)).map_err(|e| Error::io(path, e))
}

/// Three fresh seeds from the operating system's generator.
pub fn generate_keys() -> Result<KeySet> {
    let draw = || -> Result<Seed> {
        let mut s = [0u8; 32];
        OsRng
            .try_fill_bytes(&mut s)
            .map_err(|e| Error::KeyFile(format!("OS randomness unavailable: {e}")))?;
        Ok(Seed(s))
    };
    Ok(KeySet::new(draw()?, draw()?, draw()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let keys = KeySet::from_label(b"file");
        assert_eq!(parse_keys(&format_keys(&keys)).unwrap(), keys);
    }

    #[test]
    fn order_and_blank_lines_do_not_matter() {
        let text = format!(
            "\nembed={}\n\nscramble={}\nmatrix={}\n",
            "02".repeat(32),
            "00".repeat(32),
            "01".repeat(32)
        );
        let keys = parse_keys(&text).unwrap();
        assert_eq!(keys.matrix, Seed([1; 32]));
        assert!(keys.has_zero_seed());
    }

    #[test]
    fn malformed() {
        let ok = "ab".repeat(32);
        for bad in [
            format!("scramble={ok}\nmatrix={ok}\n"),
            format!("scramble={ok}\nmatrix={ok}\nembed=xyz\n"),
            format!("scramble={ok}\nscramble={ok}\nmatrix={ok}\nembed={ok}\n"),
            format!("scramble={ok}\nmatrix={ok}\nembed={ok}\nextra={ok}\n"),
            "garbage".to_string(),
        ] {
            assert!(matches!(parse_keys(&bad), Err(Error::KeyFile(_))), "{bad}");
        }
    }

    #[test]
    fn generated_keys_differ() {
        let a = generate_keys().unwrap();
        let b = generate_keys().unwrap();
        assert_ne!(a, b);
        assert_ne!(a.scramble, a.matrix);
    }
}
