//! Plain `key=value` configuration files.
//!
//! Each command accepts `--config PATH`; values found there fill in flags
//! the user did not pass (flags always win). Keys are the long flag names
//! with hyphens or underscores interchangeably (`k-grid` or `k_grid`), the
//! single-letter rate flags spelled `k` and `l`, and `#`-prefixed lines are
//! comments. Unknown keys produce a warning on stderr, not an error, so one
//! file can serve several subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{AppError, Result};

/// Parsed configuration file tracking which keys were consumed.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

/// Normalize a key: trim, lowercase, hyphens to underscores.
fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl FileConfig {
    /// A config with no file behind it.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Load and parse `path`; duplicate keys keep the last value.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| AppError::Data(format!("cannot read {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::Usage(format!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    i + 1
                ))
            })?;
            values.insert(normalize(key), value.trim().to_string());
        }
        Ok(Self {
            values,
            used: std::cell::RefCell::new(Vec::new()),
        })
    }

    /// Raw string value for `key`, if present.
    pub fn get(&self, key: &str) -> Option<&str> {
        let norm = normalize(key);
        let hit = self.values.get(&norm).map(String::as_str);
        if hit.is_some() {
            self.used.borrow_mut().push(norm);
        }
        hit
    }

    /// Parse the value for `key` as `T`; `Ok(None)` when absent.
    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                AppError::Usage(format!("config key `{key}`: invalid value `{raw}`"))
            }),
        }
    }

    /// Resolve one option: the flag wins, then the file, then nothing.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => {
                // Mark the key used either way so a redundant file entry does
                // not warn.
                let _ = self.get(key);
                Ok(Some(v))
            }
            None => self.parse(key),
        }
    }

    /// Warn on stderr about keys that no lookup ever touched.
    pub fn warn_unused(&self) {
        let used = self.used.borrow();
        for key in self.values.keys() {
            if !used.iter().any(|u| u == key) {
                eprintln!("warning: unused config key `{key}`");
            }
        }
    }
}
