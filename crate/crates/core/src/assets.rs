//! Line-oriented `key,value` asset files shared by the label map, slang
//! dictionary and leetspeak table.
//!
//! Blank lines and lines whose first non-space character is `#` are skipped.
//! The first comma splits key from value; both sides are trimmed.

use crate::error::{Error, Result};

pub const DEFAULT_LABEL_MAP: &str = include_str!("../assets/label_map.txt");
pub const DEFAULT_SLANG: &str = include_str!("../assets/slang.txt");
pub const DEFAULT_LEET: &str = include_str!("../assets/leet.txt");

/// One parsed `key,value` pair with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssetEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_pairs(name: &str, text: &str) -> Result<Vec<AssetEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once(',') else {
            return Err(Error::Asset {
                name: name.to_string(),
                line: idx + 1,
                message: format!("expected `key,value`, found {line:?}"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Asset {
                name: name.to_string(),
                line: idx + 1,
                message: "empty key or value".to_string(),
            });
        }
        out.push(AssetEntry {
            line: idx + 1,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}
