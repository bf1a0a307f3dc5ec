//! Flat `key = value` config files with `[section]` headers.
//!
//! Keys before any header belong to the top section. `#` and `;` start
//! comment lines. Underscores in keys are read as dashes, so `m_grid` and
//! `m-grid` name the same flag.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    /// Section name (`""` for the top section) to ordered `(key, value, line)` entries.
    pub sections: BTreeMap<String, Vec<(String, String, usize)>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, Vec<(String, String, usize)>> = BTreeMap::new();
        let mut current = String::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Config(format!("line {lineno}: unterminated section header")))?;
                current = name.trim().to_string();
                if current.is_empty() {
                    return Err(Error::Config(format!("line {lineno}: empty section name")));
                }
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {lineno}: expected key = value, got '{line}'")))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                return Err(Error::Config(format!("line {lineno}: empty key")));
            }
            let entries = sections.entry(current.clone()).or_default();
            if entries.iter().any(|(existing, _, _)| *existing == key) {
                return Err(Error::Config(format!("line {lineno}: duplicate key '{key}'")));
            }
            entries.push((key, v.trim().to_string(), lineno));
        }
        Ok(ConfigFile { sections })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn section(&self, name: &str) -> &[(String, String, usize)] {
        self.sections.get(name).map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section).iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_normalisation() {
        let cfg = ConfigFile::parse(
            "# run\nseed = 3\ncommand=quasi-isometry\n\n[quasi-isometry]\nm_grid = 128,256,512\nset = sparse:N=64,K=2,d=1\n",
        )
        .unwrap();
        assert_eq!(cfg.get("", "seed"), Some("3"));
        assert_eq!(cfg.get("quasi-isometry", "m-grid"), Some("128,256,512"));
        assert_eq!(cfg.get("quasi-isometry", "set"), Some("sparse:N=64,K=2,d=1"));
        assert_eq!(cfg.get("quasi-isometry", "seed"), None);
    }

    #[test]
    fn malformed_input() {
        for bad in ["[open\n", "novalue\n", "a = 1\na = 2\n", " = 3\n", "[ ]\n"] {
            assert!(matches!(ConfigFile::parse(bad), Err(Error::Config(_))), "{bad:?}");
        }
    }
}
