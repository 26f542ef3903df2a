//! Configuration-driven experiment runner.
//!
//! A run simulates the plant, the filter bank, the extended regression and
//! the requested estimators in lockstep at a fixed Euler step, then
//! evaluates the configured checks on the full-rate traces.

pub mod config;
pub mod emit;
pub mod presets;
pub mod runner;

pub use config::{CheckKind, EstimatorKind, ExperimentConfig, InputSpec, NoiseConfig, Sweep, SweepParam};
pub use emit::{csv_string, emit, summary_string, sweep_summary_string, write_all, Format};
pub use presets::{preset, PRESETS};
pub use runner::{execute, run, run_sweep, CheckOutcome, Outcome, ResetEvent, RunResult, Series, SweepResult};
