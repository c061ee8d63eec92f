use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Everything needed to re-run a command and reproduce its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    pub master_seed: Option<u64>,
    pub config: Value,
    pub codes: Value,
    pub outputs: Vec<String>,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

impl RunManifest {
    pub fn new(command: &str, master_seed: Option<u64>, config: Value, codes: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            argv: std::env::args().collect(),
            master_seed,
            config,
            codes,
            outputs: Vec::new(),
            started_unix_s: unix_now(),
            finished_unix_s: 0.0,
        }
    }

    pub fn write(mut self, dir: &Path) -> Result<()> {
        self.finished_unix_s = unix_now();
        self.outputs.sort();
        let text = serde_json::to_string_pretty(&self)?;
        write_file(dir, "manifest.json", &text)
    }
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}
