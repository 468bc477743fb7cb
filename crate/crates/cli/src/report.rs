//! JSON report envelope: every report carries the seed, resolved settings and
//! the convention block next to its payload.

use std::path::Path;

use serde::Serialize;
use twistor_core::conventions::Conventions;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct Envelope<'a, B: Serialize> {
    pub command: &'static str,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub conventions: Conventions,
    #[serde(flatten)]
    pub body: B,
}

impl<'a, B: Serialize> Envelope<'a, B> {
    pub fn new(command: &'static str, config: &'a RunConfig, body: B) -> Self {
        Self { command, seed: config.seed, config, conventions: Conventions::default(), body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize")
    }

    /// Writes the report to `path` and echoes it on stdout.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        let json = self.to_json();
        if let Some(p) = path {
            ensure_parent(p)?;
            std::fs::write(p, format!("{json}\n")).map_err(|e| CliError::io(p, e))?;
        }
        println!("{json}");
        Ok(())
    }
}

pub fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e)),
        _ => Ok(()),
    }
}
