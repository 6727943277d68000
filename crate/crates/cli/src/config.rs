//! Optional TOML configuration file. Every command reads defaults from its
//! section; command-line flags override file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub fit: ModelSection,
    #[serde(default)]
    pub forecast: ForecastSection,
    #[serde(default)]
    pub diagnose: DiagnoseSection,
    #[serde(default)]
    pub mc_experiment: McSection,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimulateSection {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub burn_in: Option<usize>,
    pub output: Option<PathBuf>,
    pub custom: Option<CustomModel>,
}

/// Custom simulation target: seed-vectors per unit root (each of length
/// `period`), Jordan block sizes, per-season variances and an optional
/// stationary part (coefficient rows per season).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CustomModel {
    pub period: usize,
    pub seeds: Vec<Vec<f64>>,
    pub blocks: Vec<usize>,
    pub sigma2: Vec<f64>,
    pub stationary: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelSection {
    pub input: Option<PathBuf>,
    pub period: Option<usize>,
    pub p: Option<usize>,
    pub m1: Option<usize>,
    pub blocks: Option<Vec<usize>>,
    pub center: Option<bool>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub output_prefix: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ForecastSection {
    #[serde(flatten)]
    pub model: ModelSection,
    pub horizon: Option<usize>,
    pub level: Option<f64>,
    pub log: Option<bool>,
    pub route: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DiagnoseSection {
    #[serde(flatten)]
    pub model: ModelSection,
    pub lags: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct McSection {
    pub model: Option<String>,
    pub reps: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub output: Option<PathBuf>,
}
