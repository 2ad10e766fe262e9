use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{JumpsiftError, Result};
use crate::estimators::ThresholdSpec;
use crate::mc::{ExperimentConfig, GridSpec, HistogramSpec};
use crate::sim::ModelConfig;

pub const SCHEMA_VERSION: u32 = 1;

pub const PRESETS: &[&str] = &[
    "model1-desk",
    "model1-paper",
    "model2-desk",
    "model2-paper",
    "model3-desk",
    "model3-paper",
    "diffusion-desk",
];

/// On-disk experiment configuration (TOML).
///
/// ```toml
/// schema_version = 1
/// n_paths = 500
/// base_seed = 42
///
/// [model]
/// kind = "model1"
/// sigma = 0.3
/// jump_intensity = 5.0
/// jump_size_std = 0.6
///
/// [grid]
/// n = 2000
/// horizon = 1.0
///
/// [threshold]
/// exponent = 0.9
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub model: ModelConfig,
    pub grid: GridSpec,
    pub threshold: ThresholdSpec,
    #[serde(default = "one")]
    pub substeps: usize,
    #[serde(default = "one")]
    pub n_paths: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

fn one() -> usize {
    1
}

impl ConfigFile {
    pub fn into_experiment(self) -> Result<ExperimentConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(JumpsiftError::config(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        let cfg = ExperimentConfig {
            model: self.model,
            grid: self.grid,
            substeps: self.substeps,
            threshold: self.threshold,
            n_paths: self.n_paths,
            base_seed: self.base_seed,
            parallelism: self.parallelism,
            histogram: self.histogram,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_experiment(cfg: &ExperimentConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: cfg.model.clone(),
            grid: cfg.grid,
            threshold: cfg.threshold,
            substeps: cfg.substeps,
            n_paths: cfg.n_paths,
            base_seed: cfg.base_seed,
            parallelism: cfg.parallelism,
            histogram: cfg.histogram,
        }
    }
}

/// Parses TOML config text. Errors name the offending key.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| {
        let msg = e.message().to_string();
        let key = missing_or_unknown_key(&msg).unwrap_or_else(|| "<document>".to_string());
        JumpsiftError::config(key, msg)
    })?;
    file.into_experiment()
}

pub fn parse_config_file(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| JumpsiftError::io(path, e))?;
    parse_config_str(&text)
}

pub fn to_toml(cfg: &ExperimentConfig) -> Result<String> {
    toml::to_string(&ConfigFile::from_experiment(cfg))
        .map_err(|e| JumpsiftError::config("<document>", e.to_string()))
}

// serde reports "missing field `x`" and "unknown field `x`, expected ..."
fn missing_or_unknown_key(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let desk = |model: ModelConfig, beta: f64, substeps: usize| ExperimentConfig {
        model,
        grid: GridSpec::uniform(2000, 1.0),
        substeps,
        threshold: ThresholdSpec::power_law(beta),
        n_paths: 500,
        base_seed: 20_240_601,
        parallelism: 0,
        histogram: HistogramSpec::default(),
    };
    let paper = |model: ModelConfig, beta: f64, substeps: usize| ExperimentConfig {
        grid: GridSpec::uniform(6000, 1.0),
        n_paths: 5000,
        ..desk(model, beta, substeps)
    };
    let cfg = match name {
        "model1-desk" => desk(ModelConfig::model1(), 0.9, 1),
        "model1-paper" => paper(ModelConfig::model1(), 0.9, 1),
        "model2-desk" => desk(ModelConfig::model2(), 0.9, 5),
        "model2-paper" => paper(ModelConfig::model2(), 0.9, 5),
        "model3-desk" => desk(ModelConfig::model3(), 0.99, 1),
        "model3-paper" => paper(ModelConfig::model3(), 0.99, 1),
        "diffusion-desk" => desk(ModelConfig::diffusion(0.3), 0.9, 1),
        other => {
            return Err(JumpsiftError::config(
                "preset",
                format!("unknown preset `{other}`; known: {}", PRESETS.join(", ")),
            ))
        }
    };
    Ok(cfg)
}
