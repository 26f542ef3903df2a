//! The six reference experiments on the plant `(4s + 1)/(s² + s + 4)`.
//!
//! Every preset uses `Γ₀ = I`, `λ = 1`, `β = 2`, `u = 100`, `dt = 1e-4` and
//! the filter `s² + 45s + 15` unless it sweeps one of them. Horizons and
//! sweep values are harness choices; curve overlap with published figures is
//! not a goal, only the qualitative ordering and the bound checks are.

use super::config::{CheckKind, EstimatorKind, ExperimentConfig, NoiseConfig, Sweep, SweepParam};
use crate::error::{Error, Result};

/// Preset names with a one-line description.
pub const PRESETS: [(&str, &str); 6] = [
    ("exp1", "RLS-MRE against the gradient law under a constant input"),
    ("exp2", "norm of the adaptation rate matrix against its bounds"),
    ("exp3", "forgetting factor sweep 0.5, 1, 2"),
    ("exp4", "memory factor sweep 0.5, 1, 2 without noise"),
    ("exp5", "RLS-MRE against the integrator law with measurement noise"),
    ("exp6", "memory factor sweep 0.5, 1, 2 with measurement noise"),
];

const SWEEP: [f64; 3] = [0.5, 1.0, 2.0];

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    use CheckKind::*;
    use EstimatorKind::*;

    let base = ExperimentConfig {
        name: name.to_string(),
        ..ExperimentConfig::default()
    };
    let noisy = Some(NoiseConfig {
        power: 100.0,
        sample_time: 1e-4,
    });
    let cfg = match name {
        "exp1" => ExperimentConfig {
            estimators: vec![RlsMre, Gradient],
            checks: vec![OmegaBound, RegressionIdentity, RlsConverged, GradientStalled, LyapunovRate, IeNotPe],
            ..base
        },
        "exp2" => ExperimentConfig {
            checks: vec![OmegaBound, GammaPreTBound, GammaGrowthEnvelope, GammaLimit],
            ..base
        },
        "exp3" => ExperimentConfig {
            // the slowest member needs about 19 s to reach the 1% threshold
            t_end: 30.0,
            checks: vec![OmegaBound, RlsConverged],
            sweep: Some(Sweep {
                param: SweepParam::LambdaF,
                values: SWEEP.to_vec(),
            }),
            ..base
        },
        "exp4" => ExperimentConfig {
            checks: vec![OmegaBound, RlsConverged],
            sweep: Some(Sweep {
                param: SweepParam::Beta,
                values: SWEEP.to_vec(),
            }),
            ..base
        },
        "exp5" => ExperimentConfig {
            t_end: 40.0,
            noise: noisy,
            estimators: vec![RlsMre, IntegratorPi],
            checks: vec![OmegaBound, PiDrift, UltimateBound, DisturbedRate],
            ..base
        },
        "exp6" => ExperimentConfig {
            t_end: 40.0,
            noise: noisy,
            checks: vec![OmegaBound, UltimateBound, DisturbedRate],
            sweep: Some(Sweep {
                param: SweepParam::Beta,
                values: SWEEP.to_vec(),
            }),
            ..base
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(cfg)
}
