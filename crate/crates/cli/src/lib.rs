//! Batch driver for the `arealaw` checks: JSON configs in, CSV and JSON
//! reports out.

pub mod config;
pub mod experiments;
pub mod fuzz;
pub mod presets;
pub mod report;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::run;
pub use presets::Registry;
pub use report::CheckReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] arealaw::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Every error is reported with the config-error status.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Exit status of a finished run.
pub fn exit_code(report: &CheckReport) -> i32 {
    if report.summary.fail_count == 0 {
        0
    } else {
        1
    }
}

/// Independent stream `task` of the root seed.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Loads, runs and, if the config names an output directory, emits.
pub fn run_config(config: &ExperimentConfig) -> Result<CheckReport, CliError> {
    let report = run(config)?;
    if let Some(dir) = &config.output {
        report.emit(dir)?;
    }
    Ok(report)
}
