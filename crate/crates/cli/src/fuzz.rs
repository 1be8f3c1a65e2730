//! Randomized runs of each experiment from a single root seed.

use rand::Rng;
use serde_json::{json, Value};

use crate::config::{default_betas, ExperimentConfig, ExperimentKind};
use crate::{task_rng, CliError};

/// Stream reserved for drawing the fuzz parameters themselves.
const PARAMETER_STREAM: u64 = u64::MAX;

/// A config drawing `draws` random instances (or random temperatures and
/// profiles, for experiments built on fixed presets).
pub fn fuzz_config(experiment: ExperimentKind, seed: u64, draws: usize) -> Result<ExperimentConfig, CliError> {
    if draws == 0 {
        return Err(CliError::Config("draws must be positive".into()));
    }
    let mut rng = task_rng(seed, PARAMETER_STREAM);
    let betas = |rng: &mut rand_chacha::ChaCha8Rng| -> Value {
        json!((0..draws).map(|_| round3(rng.random_range(0.0..4.0))).collect::<Vec<f64>>())
    };
    let (presets, params): (Vec<String>, Value) = match experiment {
        ExperimentKind::ClassicalArea | ExperimentKind::Concavity => (Vec::new(), json!({"beta": betas(&mut rng)})),
        ExperimentKind::Saturation => (Vec::new(), json!({"beta": betas(&mut rng)})),
        ExperimentKind::QuantumArea => {
            (vec!["random-2local-chain-8".into()], json!({"beta": default_betas(), "draws": draws}))
        }
        ExperimentKind::CorrelatorBound => (Vec::new(), json!({"draws": draws})),
        ExperimentKind::ShellChain => (Vec::new(), json!({"states": draws})),
        ExperimentKind::FcsDecay => (vec!["random-d2".into(), "random-d3".into()], json!({"draws": draws})),
        ExperimentKind::FcsArea => (vec!["random-pure-d2".into(), "random-pure-d3".into()], json!({"draws": draws})),
        ExperimentKind::GibbsPeps => {
            (vec!["random-commuting-mpo-ring-6".into()], json!({"beta": betas(&mut rng), "draws": draws}))
        }
        ExperimentKind::SingletScaling => {
            let presets = (0..draws)
                .map(|k| {
                    if k % 2 == 0 {
                        format!("exponential:{}", round3(rng.random_range(2.0..6.0)))
                    } else {
                        format!("lorentzian:{}", round3(rng.random_range(1.0..2.5)))
                    }
                })
                .collect();
            (presets, json!({}))
        }
    };
    Ok(ExperimentConfig { presets, params, seed: Some(seed), ..ExperimentConfig::new(experiment) })
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}
