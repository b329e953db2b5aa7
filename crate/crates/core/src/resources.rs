//! Versioned data tables shipped with the engine.
//!
//! Every table is a UTF-8 TSV file. Lines starting with `#` are comments,
//! and a `# version: N` comment names the table revision.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Code point (hex) to character class, covering U+1780..U+17FF.
pub const KHMER_CLASSES: &str = include_str!("../resources/khmer_classes.tsv");
/// Per-cluster grapheme-to-phoneme fallback rules.
pub const G2P_RULES: &str = include_str!("../resources/g2p_rules.tsv");
/// Affixes that label compound joints as prefix (`~`) or suffix (`^`).
pub const AFFIXES: &str = include_str!("../resources/affixes.tsv");
/// Titles after which an unknown word is taken to be a name.
pub const HONORIFICS: &str = include_str!("../resources/honorifics.tsv");

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads the `# version: N` header of a table, if present.
pub fn table_version(table: &str) -> Option<&str> {
    table
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("version:"))
        .map(str::trim)
}

/// Parses a two-column TSV table. The second column may be empty.
pub fn parse_two_columns(text: &str) -> Result<Vec<(String, String)>> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(idx + 1, "expected two tab-separated columns"))?;
        if key.is_empty() {
            return Err(Error::parse(idx + 1, "empty key"));
        }
        rows.push((key.to_string(), value.trim().to_string()));
    }
    Ok(rows)
}
