use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::{ConfigFile, SCHEMA_VERSION};
use crate::error::{JumpsiftError, Result};
use crate::mc::ExperimentConfig;
use crate::rng::RNG_ALGORITHM;

/// Everything needed to re-run a command. Re-running from the echoed config
/// reproduces the listed outputs byte for byte; only `wall_clock` differs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub rng_algorithm: String,
    pub subcommand: String,
    pub base_seed: u64,
    pub config: ConfigFile,
    /// Seconds since the Unix epoch when the run finished.
    pub wall_clock: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, cfg: &ExperimentConfig, outputs: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_algorithm: RNG_ALGORITHM.to_string(),
            subcommand: subcommand.to_string(),
            base_seed: cfg.base_seed,
            config: ConfigFile::from_experiment(cfg),
            wall_clock: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| JumpsiftError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| JumpsiftError::config("manifest", e.to_string()))
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        if self.rng_algorithm != RNG_ALGORITHM {
            return Err(JumpsiftError::config(
                "rng_algorithm",
                format!("manifest uses `{}`, this build uses `{RNG_ALGORITHM}`", self.rng_algorithm),
            ));
        }
        self.config.clone().into_experiment()
    }
}
