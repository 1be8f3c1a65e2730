use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Default tolerance of assertion-class checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ClassicalArea,
    QuantumArea,
    CorrelatorBound,
    ShellChain,
    Concavity,
    FcsDecay,
    FcsArea,
    GibbsPeps,
    SingletScaling,
    Saturation,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::ClassicalArea,
        ExperimentKind::QuantumArea,
        ExperimentKind::CorrelatorBound,
        ExperimentKind::ShellChain,
        ExperimentKind::Concavity,
        ExperimentKind::FcsDecay,
        ExperimentKind::FcsArea,
        ExperimentKind::GibbsPeps,
        ExperimentKind::SingletScaling,
        ExperimentKind::Saturation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ClassicalArea => "classical-area",
            ExperimentKind::QuantumArea => "quantum-area",
            ExperimentKind::CorrelatorBound => "correlator-bound",
            ExperimentKind::ShellChain => "shell-chain",
            ExperimentKind::Concavity => "concavity",
            ExperimentKind::FcsDecay => "fcs-decay",
            ExperimentKind::FcsArea => "fcs-area",
            ExperimentKind::GibbsPeps => "gibbs-peps",
            ExperimentKind::SingletScaling => "singlet-scaling",
            ExperimentKind::Saturation => "saturation",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment '{s}'")))
    }
}

/// One batch run. Unknown keys anywhere are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    /// Models, channels, profiles or ring states; empty selects the
    /// experiment's default set.
    #[serde(default)]
    pub presets: Vec<String>,
    /// Experiment-specific grids and settings.
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Directory receiving the CSV and JSON reports.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory of additional preset files.
    #[serde(default)]
    pub custom_presets: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment,
            presets: Vec::new(),
            params: empty_object(),
            seed: None,
            tolerance: None,
            output: None,
            custom_presets: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                config.schema_version
            )));
        }
        if !config.params.is_object() {
            return Err(CliError::Config("params must be an object".into()));
        }
        if let Some(t) = config.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!("tolerance must be a nonnegative number, got {t}")));
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// SHA-256 of the canonical JSON form (keys sorted, no whitespace).
    pub fn digest(&self) -> String {
        let mut canonical = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = canonical.as_object_mut() {
            map.remove("output");
        }
        let bytes = serde_json::to_vec(&canonical).expect("value serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::Config(format!("invalid params for {}: {e}", self.experiment)))
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Config(format!("{} draws random instances and needs a seed", self.experiment)))
    }
}

pub fn default_betas() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0]
}

pub fn non_empty<T>(name: &str, grid: &[T]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("grid '{name}' is empty")));
    }
    Ok(())
}

pub fn check_betas(betas: &[f64]) -> Result<(), CliError> {
    non_empty("beta", betas)?;
    if let Some(b) = betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(CliError::Config(format!("beta must be finite and nonnegative, got {b}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaParams {
    #[serde(default = "default_betas")]
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GibbsPepsParams {
    #[serde(default = "default_betas")]
    pub beta: Vec<f64>,
    /// Instances drawn for each random preset.
    #[serde(default = "one")]
    pub draws: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumAreaParams {
    #[serde(default = "default_betas")]
    pub beta: Vec<f64>,
    /// Instances drawn for each random preset.
    #[serde(default = "fifty")]
    pub draws: usize,
}

fn fifty() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorParams {
    #[serde(default = "ten_thousand")]
    pub draws: usize,
    #[serde(default = "two_to_four")]
    pub qubits: Vec<usize>,
}

fn ten_thousand() -> usize {
    10_000
}

fn two_to_four() -> Vec<usize> {
    vec![2, 3, 4]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellParams {
    #[serde(default = "hundred")]
    pub states: usize,
    #[serde(default = "five_six")]
    pub qubits: Vec<usize>,
}

fn hundred() -> usize {
    100
}

fn five_six() -> Vec<usize> {
    vec![5, 6]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FcsDecayParams {
    /// Separations `L`.
    #[serde(default = "one_to_twelve")]
    pub gaps: Vec<usize>,
    /// Length of each of the blocks `A` and `B`.
    #[serde(default = "two")]
    pub block: usize,
    /// Separations used by the trace-distance fit, inclusive.
    #[serde(default = "td_fit_range")]
    pub fit_range: (usize, usize),
    /// Separations used by the mutual-information fit, inclusive.
    #[serde(default = "mi_fit_range")]
    pub mi_fit_range: (usize, usize),
    /// Allowed relative deviation of the trace-distance slope from `ln η`.
    #[serde(default = "slope_tolerance")]
    pub slope_tolerance: f64,
    /// When set, the mutual-information rate is also asserted against
    /// `ln η` with this relative tolerance.
    #[serde(default)]
    pub mi_rate_tolerance: Option<f64>,
    #[serde(default = "twenty")]
    pub draws: usize,
}

fn one_to_twelve() -> Vec<usize> {
    (1..=12).collect()
}

fn two() -> usize {
    2
}

fn td_fit_range() -> (usize, usize) {
    (2, 12)
}

fn mi_fit_range() -> (usize, usize) {
    (4, 12)
}

fn slope_tolerance() -> f64 {
    0.1
}

fn twenty() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FcsAreaParams {
    #[serde(default = "one_to_six")]
    pub lengths: Vec<usize>,
    #[serde(default = "twenty")]
    pub draws: usize,
}

fn one_to_six() -> Vec<usize> {
    (1..=6).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingletParams {
    #[serde(default = "default_radii")]
    pub radii: Vec<usize>,
    #[serde(default = "default_gaps")]
    pub gaps: Vec<usize>,
    /// Overrides the profile's truncation distance.
    #[serde(default)]
    pub cutoff: Option<usize>,
}

pub fn default_radii() -> Vec<usize> {
    vec![50, 100, 150, 200, 300, 400, 600, 800]
}

pub fn default_gaps() -> Vec<usize> {
    (0..=40).step_by(4).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturationParams {
    /// Inverse temperatures for thermal presets.
    #[serde(default = "half")]
    pub beta: Vec<f64>,
}

fn half() -> Vec<f64> {
    vec![0.5]
}
