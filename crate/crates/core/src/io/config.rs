use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::ScanConfig;

/// A value given on the command line that replaced the file (or default) value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Override {
    pub key: String,
    pub previous: String,
    pub value: String,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses TOML text. Unknown keys are named in the error; type mismatches
/// report the line number.
pub fn parse_config_str(text: &str, path: &Path) -> Result<ScanConfig> {
    let cfg: ScanConfig = toml::from_str(text).map_err(|e| {
        let message = e.message().trim().to_string();
        let message = match e.span() {
            Some(span) => format!("line {}: {message}", line_of(text, span.start)),
            None => message,
        };
        Error::Config {
            path: path.to_path_buf(),
            message,
        }
    })?;
    cfg.validate().map_err(|e| Error::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ScanConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, path)
}

pub fn dump_config(cfg: &ScanConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::validation(format!("cannot serialize config: {e}")))
}

/// Collects overrides for the manifest while applying them.
#[derive(Debug, Default)]
pub struct Overrides(pub Vec<Override>);

impl Overrides {
    /// Sets `*slot = value` when a flag was given.
    pub fn apply<T: PartialEq + std::fmt::Display>(&mut self, key: &str, slot: &mut T, value: Option<T>) {
        if let Some(v) = value {
            self.0.push(Override {
                key: key.to_string(),
                previous: slot.to_string(),
                value: v.to_string(),
            });
            *slot = v;
        }
    }
}
