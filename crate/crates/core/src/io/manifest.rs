use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Override;
use super::table::{write_atomic, OutputEntry};
use crate::error::{Error, Result};
use crate::experiments::ScanConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one CLI run: what was asked for and what was written.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ScanConfig,
    pub seed: u64,
    pub overrides: Vec<Override>,
    /// RFC 3339, UTC.
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputEntry>,
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new(command: &str, config: &ScanConfig, overrides: Vec<Override>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            seed: config.seed,
            overrides,
            started: now_rfc3339(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&mut self, path: &Path) -> Result<()> {
        self.finished = now_rfc3339();
        let json = serde_json::to_vec_pretty(self)
            .map_err(|e| Error::validation(format!("cannot serialize manifest: {e}")))?;
        write_atomic(path, &json)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}
