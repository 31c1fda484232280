//! Record written next to every output set.

use std::path::Path;

use cavscat::ScatterConfig;

use crate::config;
use crate::error::{CliError, CliResult};

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub cfg: ScatterConfig,
    pub timestamp: String,
    pub code_version: String,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, cfg: &ScatterConfig, output_paths: Vec<String>) -> Self {
        RunManifest {
            command: command.into(),
            cfg: cfg.clone(),
            timestamp: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            code_version: CODE_VERSION.to_string(),
            output_paths,
        }
    }

    /// Same `key = value` format as configuration files, so a manifest can
    /// be passed back through `--config`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("command = {}\n", self.command));
        s.push_str(&format!("timestamp = {}\n", self.timestamp));
        s.push_str(&format!("code_version = {}\n", self.code_version));
        s.push_str(&format!("outputs = {}\n", self.output_paths.join(",")));
        s.push_str(&config::echo(&self.cfg));
        s
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg = config::parse(text)?;
        let meta = |key: &str| {
            text.lines()
                .filter_map(|l| l.split_once('='))
                .find(|(k, _)| k.trim() == key)
                .map(|(_, v)| v.trim().to_string())
                .ok_or_else(|| CliError::Config(format!("manifest lacks `{key}`")))
        };
        let outputs = meta("outputs")?;
        Ok(RunManifest {
            command: meta("command")?,
            cfg,
            timestamp: meta("timestamp")?,
            code_version: meta("code_version")?,
            output_paths: outputs.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect(),
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}
