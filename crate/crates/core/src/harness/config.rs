//! Experiment configuration and its flat `key = value` text form.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::plant::Multisine;

/// Plant input.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Constant(f64),
    Multisine(Multisine),
    /// `(start time, value)` pairs sorted by start time. The first entry
    /// should start at 0; earlier times hold the first value.
    Schedule(Vec<(f64, f64)>),
}

impl InputSpec {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            InputSpec::Constant(v) => *v,
            InputSpec::Multisine(m) => m.value(t),
            InputSpec::Schedule(s) => s[self.segment(t)].1,
        }
    }

    /// Index of the active schedule segment, 0 for non-schedule inputs.
    pub fn segment(&self, t: f64) -> usize {
        match self {
            InputSpec::Schedule(s) => s.partition_point(|&(start, _)| start <= t + 1e-12).max(1) - 1,
            _ => 0,
        }
    }
}

/// Adaptation laws a run can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    RlsMre,
    Gradient,
    IntegratorPi,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 3] = [Self::RlsMre, Self::Gradient, Self::IntegratorPi];

    pub fn name(self) -> &'static str {
        match self {
            Self::RlsMre => "rls_mre",
            Self::Gradient => "gradient",
            Self::IntegratorPi => "integrator_pi",
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown estimator `{s}`"))
    }
}

/// Invariant checks evaluated on a single run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    /// `λ_max(Ω) ≤ δ²/β` at every step.
    OmegaBound,
    /// `|y − θᵀω| < 1e-3` after 5 s (noiseless, zero initial state).
    RegressionIdentity,
    /// Final RLS error at most 1% of the initial error.
    RlsConverged,
    /// Final gradient error at least 10% of the initial error.
    GradientStalled,
    /// `V(t) ≤ 1.05·V(T)·e^{-κ(t−T)}` after detection.
    LyapunovRate,
    /// `‖Γ(t)‖ ≤ √(e^{2λ(T−t)}‖Γ₀‖²)` before detection.
    GammaPreTBound,
    /// `‖Γ(t)‖ ≤ 1.05·e^{λt}‖Γ₀‖` before detection.
    GammaGrowthEnvelope,
    /// `‖Γ(t_end)‖` within 5% of `λ/λ_min²(Ω(t_end))`.
    GammaLimit,
    /// Integrator error at the end exceeds its value at mid-horizon.
    PiDrift,
    /// RLS `sup ‖θ̃‖` over the final third at most `R`.
    UltimateBound,
    /// Disturbed Lyapunov estimate with 5% slack.
    DisturbedRate,
    /// Late windows fail the PE test while IE holds by rank and by `Ω`.
    IeNotPe,
}

impl CheckKind {
    pub const ALL: [CheckKind; 12] = [
        Self::OmegaBound,
        Self::RegressionIdentity,
        Self::RlsConverged,
        Self::GradientStalled,
        Self::LyapunovRate,
        Self::GammaPreTBound,
        Self::GammaGrowthEnvelope,
        Self::GammaLimit,
        Self::PiDrift,
        Self::UltimateBound,
        Self::DisturbedRate,
        Self::IeNotPe,
    ];

    /// Key used in config files.
    pub fn key(self) -> &'static str {
        match self {
            Self::OmegaBound => "omega_bound",
            Self::RegressionIdentity => "regression_identity",
            Self::RlsConverged => "rls_converged",
            Self::GradientStalled => "gradient_stalled",
            Self::LyapunovRate => "lyapunov_rate",
            Self::GammaPreTBound => "gamma_pre_T_bound",
            Self::GammaGrowthEnvelope => "gamma_growth_envelope",
            Self::GammaLimit => "gamma_limit",
            Self::PiDrift => "pi_drift",
            Self::UltimateBound => "ultimate_bound",
            Self::DisturbedRate => "disturbed_rate",
            Self::IeNotPe => "ie_not_pe",
        }
    }

    /// Label used in summaries.
    pub fn label(self) -> &'static str {
        match self {
            Self::GammaLimit => "gamma_limit (±5%)",
            other => other.key(),
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    LambdaF,
    Beta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::LambdaF => "lambda_f",
            Self::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Measurement noise settings; the seed lives on [`ExperimentConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub power: f64,
    pub sample_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    /// Numerator, highest power first.
    pub num: Vec<f64>,
    /// Monic denominator, highest power first.
    pub den: Vec<f64>,
    /// Filter polynomial coefficients, lowest power first.
    pub lambdas: Vec<f64>,
    pub beta: f64,
    pub lambda_f: f64,
    pub gamma0: f64,
    pub dt: f64,
    pub t_end: f64,
    pub input: InputSpec,
    pub noise: Option<NoiseConfig>,
    pub seed: u64,
    pub x0: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub checks: Vec<CheckKind>,
    /// Store every `decimate`-th step in the output series.
    pub decimate: usize,
    /// Zero `Ω` and `Υ` at schedule changes instead of only restarting the clock.
    pub hard_reset: bool,
    /// `λ_min(Ω)` level that certifies initial excitation.
    pub ie_threshold: f64,
    /// Instants at which `ω` is sampled for the rank test.
    pub rank_times: Vec<f64>,
    /// PE window length; windows are evaluated over the last two lengths of the run.
    pub pe_window: f64,
    /// Instant at which `λ_min(Ω)` is recorded for cross-run comparison.
    pub fixed_t: f64,
    pub sweep: Option<Sweep>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            num: vec![4.0, 1.0],
            den: vec![1.0, 1.0, 4.0],
            lambdas: vec![15.0, 45.0],
            beta: 2.0,
            lambda_f: 1.0,
            gamma0: 1.0,
            dt: 1e-4,
            t_end: 20.0,
            input: InputSpec::Constant(100.0),
            noise: None,
            seed: 23_341_000,
            x0: vec![0.0, 0.0],
            estimators: vec![EstimatorKind::RlsMre],
            checks: vec![CheckKind::OmegaBound],
            decimate: 100,
            hard_reset: false,
            ie_threshold: 1e-6,
            rank_times: (1..=10).map(|k| 0.5 * k as f64).collect(),
            pe_window: 5.0,
            fixed_t: 5.0,
            sweep: None,
        }
    }
}

impl ExperimentConfig {
    pub fn has(&self, e: EstimatorKind) -> bool {
        self.estimators.contains(&e)
    }

    pub fn checks_enabled(&self, c: CheckKind) -> bool {
        self.checks.contains(&c)
    }

    /// Number of Euler steps, `⌈t_end/dt⌉`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.t_end > self.dt) {
            return bad("t_end must exceed dt");
        }
        if self.has(EstimatorKind::RlsMre) && !(self.beta > 0.0) {
            return Err(Error::BetaNonPositive(self.beta));
        }
        if !(self.gamma0 > 0.0) {
            return bad("gamma0 must be positive");
        }
        if !(self.lambda_f >= 0.0) {
            return bad("lambda_f must be nonnegative");
        }
        if self.decimate == 0 {
            return bad("decimate must be at least 1");
        }
        if self.x0.len() + 1 != self.den.len() {
            return Err(Error::InitialStateMismatch {
                expected: self.den.len().saturating_sub(1),
                got: self.x0.len(),
            });
        }
        if let InputSpec::Schedule(s) = &self.input {
            if s.is_empty() {
                return bad("schedule needs at least one segment");
            }
            if s.windows(2).any(|w| w[1].0 <= w[0].0) {
                return bad("schedule times must increase");
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return bad("sweep has no values");
            }
        }
        Ok(())
    }

    /// Copy with the sweep parameter set to `value` and the sweep removed.
    pub fn with_sweep_value(&self, param: SweepParam, value: f64) -> Self {
        let mut c = self.clone();
        c.sweep = None;
        match param {
            SweepParam::LambdaF => c.lambda_f = value,
            SweepParam::Beta => c.beta = value,
        }
        c.name = format!("{}_{}={}", self.name, param.name(), value);
        c
    }

    /// Parses the text form; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines over the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                msg: "expected `key = value`".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|msg| Error::Config { line: i + 1, msg })?;
        }
        Ok(())
    }

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "name" => self.name = value.to_string(),
            "num" => self.num = parse_list(value)?,
            "den" => self.den = parse_list(value)?,
            "lambdas" => self.lambdas = parse_list(value)?,
            "beta" => self.beta = parse_num(value)?,
            "lambda_f" => self.lambda_f = parse_num(value)?,
            "gamma0" => self.gamma0 = parse_num(value)?,
            "dt" => self.dt = parse_num(value)?,
            "t_end" => self.t_end = parse_num(value)?,
            "input" => self.input = parse_input(value)?,
            "noise" => match value {
                "none" => self.noise = None,
                _ => return Err(format!("`noise` accepts only `none`, got `{value}`")),
            },
            "noise.power" => {
                let power = parse_num(value)?;
                let sample_time = self.noise.map_or(self.dt, |n| n.sample_time);
                self.noise = Some(NoiseConfig { power, sample_time });
            }
            "noise.sample_time" => {
                let sample_time = parse_num(value)?;
                let power = self.noise.map_or(0.0, |n| n.power);
                self.noise = Some(NoiseConfig { power, sample_time });
            }
            "seed" => self.seed = value.parse().map_err(|e| format!("bad seed `{value}`: {e}"))?,
            "x0" => self.x0 = parse_list(value)?,
            "estimators" => self.estimators = parse_names(value)?,
            "checks" => self.checks = parse_names(value)?,
            "decimate" => {
                self.decimate = value.parse().map_err(|e| format!("bad decimate `{value}`: {e}"))?
            }
            "hard_reset" => self.hard_reset = parse_bool(value)?,
            "ie_threshold" => self.ie_threshold = parse_num(value)?,
            "rank_times" => self.rank_times = parse_list(value)?,
            "pe_window" => self.pe_window = parse_num(value)?,
            "fixed_t" => self.fixed_t = parse_num(value)?,
            "sweep" => self.sweep = parse_sweep(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Text form accepted by [`ExperimentConfig::parse`].
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("name", self.name.clone());
        put("num", join(&self.num));
        put("den", join(&self.den));
        put("lambdas", join(&self.lambdas));
        put("beta", self.beta.to_string());
        put("lambda_f", self.lambda_f.to_string());
        put("gamma0", self.gamma0.to_string());
        put("dt", self.dt.to_string());
        put("t_end", self.t_end.to_string());
        put("input", self.input.to_string());
        match self.noise {
            None => put("noise", "none".into()),
            Some(n) => {
                put("noise.power", n.power.to_string());
                put("noise.sample_time", n.sample_time.to_string());
            }
        }
        put("seed", self.seed.to_string());
        put("x0", join(&self.x0));
        put("estimators", self.estimators.iter().map(|e| e.name()).collect::<Vec<_>>().join(", "));
        put("checks", self.checks.iter().map(|c| c.key()).collect::<Vec<_>>().join(", "));
        put("decimate", self.decimate.to_string());
        put("hard_reset", self.hard_reset.to_string());
        put("ie_threshold", self.ie_threshold.to_string());
        put("rank_times", join(&self.rank_times));
        put("pe_window", self.pe_window.to_string());
        put("fixed_t", self.fixed_t.to_string());
        if let Some(sw) = &self.sweep {
            put("sweep", format!("{} {}", sw.param.name(), join(&sw.values)));
        }
        s
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSpec::Constant(v) => write!(f, "constant {v}"),
            InputSpec::Multisine(m) => {
                let terms: Vec<String> = m
                    .amplitudes()
                    .iter()
                    .zip(m.frequencies())
                    .map(|(a, w)| format!("{a}@{w}"))
                    .collect();
                write!(f, "multisine {}", terms.join(", "))
            }
            InputSpec::Schedule(s) => {
                let terms: Vec<String> = s.iter().map(|(t, v)| format!("{t}:{v}")).collect();
                write!(f, "schedule {}", terms.join(", "))
            }
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn parse_num(s: &str) -> Result<f64, String> {
    s.trim().parse().map_err(|_| format!("not a number: `{}`", s.trim()))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_num).collect()
}

fn parse_names<T: FromStr<Err = String>>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("not a boolean: `{s}`")),
    }
}

fn parse_pairs(s: &str, sep: char) -> Result<Vec<(f64, f64)>, String> {
    s.split(',')
        .map(|term| {
            let (a, b) = term
                .split_once(sep)
                .ok_or_else(|| format!("expected `a{sep}b`, got `{}`", term.trim()))?;
            Ok((parse_num(a)?, parse_num(b)?))
        })
        .collect()
}

fn parse_input(s: &str) -> Result<InputSpec, String> {
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    match kind {
        "constant" => Ok(InputSpec::Constant(parse_num(rest)?)),
        "multisine" => {
            let terms = if rest.trim().is_empty() { Vec::new() } else { parse_pairs(rest, '@')? };
            let (a, w): (Vec<f64>, Vec<f64>) = terms.into_iter().unzip();
            Multisine::new(&a, &w).map(InputSpec::Multisine).map_err(|e| e.to_string())
        }
        "schedule" => Ok(InputSpec::Schedule(parse_pairs(rest, ':')?)),
        _ => parse_num(s).map(InputSpec::Constant),
    }
}

fn parse_sweep(s: &str) -> Result<Option<Sweep>, String> {
    if s == "none" {
        return Ok(None);
    }
    let (param, rest) = s.split_once(char::is_whitespace).ok_or("expected `param v1, v2, ..`")?;
    let param = match param {
        "lambda_f" => SweepParam::LambdaF,
        "beta" => SweepParam::Beta,
        other => return Err(format!("cannot sweep `{other}`")),
    };
    Ok(Some(Sweep {
        param,
        values: parse_list(rest)?,
    }))
}
