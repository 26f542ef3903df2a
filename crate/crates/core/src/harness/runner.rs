//! Lockstep simulation of plant, filters, extended regression and estimators.
//!
//! Every check is evaluated on full-rate internal traces, so the output
//! decimation only affects what is stored in [`Series`].

use nalgebra::DVector;

use super::config::{CheckKind, EstimatorKind, ExperimentConfig, SweepParam};
use crate::bounds::{self, BoundsReport};
use crate::error::{Error, Result};
use crate::estimator::{parameter_error, BaselineState, RlsMre};
use crate::excitation::{self, ExcitationReport, IeMonitor, OmegaLog};
use crate::linalg;
use crate::mre::{epsilon_max_estimate, ExtendedRegression};
use crate::plant::{NoiseSpec, PlantModel};
use crate::regressor::{LambdaFilter, RegressorState, TrueTheta};

/// Relative slack on every bound comparison.
pub const BOUND_SLACK: f64 = 0.05;
/// `‖θ̃‖ / ‖θ̃(0)‖` level that defines the time to threshold.
pub const CONVERGED_FRACTION: f64 = 1e-2;
/// `‖θ̃‖ / ‖θ̃(0)‖` level below which the gradient law counts as converging.
pub const STALLED_FRACTION: f64 = 1e-1;
/// Start of the window over which the regression residual is checked.
pub const IDENTITY_AFTER: f64 = 5.0;
pub const IDENTITY_TOL: f64 = 1e-3;
/// Stride, in steps, of the regressor log used for the PE window test.
const PE_STRIDE: usize = 10;

/// Stored time series, one entry per decimated step. Columns of estimators
/// that were not run are empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    pub t: Vec<f64>,
    pub err_rls: Vec<f64>,
    pub err_grad: Vec<f64>,
    pub err_pi: Vec<f64>,
    pub norm_gamma: Vec<f64>,
    pub lam_min_omega: Vec<f64>,
    pub det_omega: Vec<f64>,
}

impl Series {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Pass/fail of one check with a short human-readable detail.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Restart of the memory clock at a setpoint change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetEvent {
    pub step: usize,
    pub t: f64,
    pub setpoint: f64,
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub theta: TrueTheta,
    /// `‖θ̃(0)‖`, shared by all estimators since they start from zero.
    pub initial_error: f64,
    pub series: Series,
    pub excitation: ExcitationReport,
    pub bounds: Option<BoundsReport>,
    pub checks: Vec<CheckOutcome>,
    pub resets: Vec<ResetEvent>,
    pub theta_hat_rls: Option<DVector<f64>>,
    /// First time the RLS error drops to 1% of its initial value.
    pub time_to_threshold: Option<f64>,
    /// `λ_min(Ω)` at `config.fixed_t`.
    pub lam_min_omega_fixed: Option<f64>,
    pub omega_bound_violations: usize,
    /// `max_t λ_max(Ω)/(δ²/β)`.
    pub worst_omega_ratio: f64,
    /// `max |y − θᵀω|` over `t > 5 s`, disturbance excluded.
    pub identity_residual: f64,
    pub w_max: f64,
}

impl RunResult {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Members of a sweep in configured order, plus the cross-run checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub members: Vec<RunResult>,
    pub checks: Vec<CheckOutcome>,
}

impl SweepResult {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.members.iter().all(RunResult::all_passed)
    }
}

/// A single run or a sweep, depending on the configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Single(Box<RunResult>),
    Sweep(SweepResult),
}

impl Outcome {
    pub fn all_passed(&self) -> bool {
        match self {
            Outcome::Single(r) => r.all_passed(),
            Outcome::Sweep(s) => s.all_passed(),
        }
    }
}

/// Runs a sweep when one is configured, a single run otherwise.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    match config.sweep {
        Some(_) => run_sweep(config).map(Outcome::Sweep),
        None => run(config).map(|r| Outcome::Single(Box::new(r))),
    }
}

/// Full-rate traces, index `k` at `t = k·dt`.
struct Trace {
    err_rls: Vec<f64>,
    err_grad: Vec<f64>,
    err_pi: Vec<f64>,
    gamma_norm: Vec<f64>,
    v: Vec<Option<f64>>,
    lam_min: Vec<f64>,
    det: Vec<f64>,
}

struct Estimators {
    rls: Option<RlsMre>,
    grad: Option<BaselineState>,
    pi: Option<(BaselineState, ExtendedRegression)>,
}

impl Estimators {
    fn record(&self, theta: &TrueTheta, trace: &mut Trace) -> Result<()> {
        if let Some(r) = &self.rls {
            trace.err_rls.push(parameter_error(&r.theta_hat, theta)?);
            trace.gamma_norm.push(r.gamma_norm());
            trace.v.push(r.lyapunov(theta));
        }
        if let Some(g) = &self.grad {
            trace.err_grad.push(parameter_error(&g.theta_hat, theta)?);
        }
        if let Some((p, _)) = &self.pi {
            trace.err_pi.push(parameter_error(&p.theta_hat, theta)?);
        }
        Ok(())
    }
}

pub fn run(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let cfg = config;
    let dt = cfg.dt;
    let n = cfg.steps();

    let plant = PlantModel::from_tf(&cfg.num, &cfg.den)?.with_x0(&cfg.x0)?;
    let filter = LambdaFilter::new(&cfg.lambdas)?;
    if filter.order() != plant.order() {
        return Err(Error::OrderMismatch {
            plant: plant.order(),
            filter: filter.order(),
        });
    }
    let theta = TrueTheta::for_plant(&plant, &filter)?;
    let dim = theta.dim();
    let noise = cfg
        .noise
        .map(|nc| NoiseSpec::new(nc.power, cfg.seed, nc.sample_time))
        .transpose()?;

    let mut reg = RegressorState::new(&filter, plant.num_degree())?;
    let mut ext = if cfg.beta > 0.0 {
        ExtendedRegression::new(dim, cfg.beta)?
    } else {
        ExtendedRegression::integrator(dim)
    };
    let mut est = Estimators {
        rls: cfg
            .has(EstimatorKind::RlsMre)
            .then(|| RlsMre::new(dim, cfg.gamma0, cfg.lambda_f))
            .transpose()?,
        grad: cfg
            .has(EstimatorKind::Gradient)
            .then(|| BaselineState::new(dim, cfg.gamma0))
            .transpose()?,
        pi: cfg
            .has(EstimatorKind::IntegratorPi)
            .then(|| BaselineState::new(dim, cfg.gamma0).map(|b| (b, ExtendedRegression::integrator(dim))))
            .transpose()?,
    };

    let mut trace = Trace {
        err_rls: Vec::with_capacity(n + 1),
        err_grad: Vec::with_capacity(n + 1),
        err_pi: Vec::with_capacity(n + 1),
        gamma_norm: Vec::with_capacity(n + 1),
        v: Vec::with_capacity(n + 1),
        lam_min: Vec::with_capacity(n + 1),
        det: Vec::with_capacity(n + 1),
    };
    est.record(&theta, &mut trace)?;
    trace.lam_min.push(0.0);
    trace.det.push(0.0);
    let initial_error = theta.as_vector().norm();

    let mut ie = IeMonitor::new(cfg.ie_threshold);
    let mut rank_samples = Vec::new();
    let mut next_rank = 0;
    let mut pe_log = OmegaLog::new();
    let pe_from = cfg.t_end - 2.0 * cfg.pe_window;
    let want_pe = cfg.checks_enabled(CheckKind::IeNotPe);

    let mut resets = Vec::new();
    let mut segment = cfg.input.segment(0.0);
    let mut x = plant.x0().clone();
    let mut w_max = 0.0f64;
    let mut identity_residual = 0.0f64;
    let mut lam_min_fixed = None;

    for k in 0..n {
        let t = k as f64 * dt;
        let at = |e: Error| Error::AtStep {
            step: k,
            t,
            source: Box::new(e),
        };

        let seg = cfg.input.segment(t);
        if seg != segment {
            segment = seg;
            ext.reset_epoch(cfg.hard_reset);
            resets.push(ResetEvent {
                step: k,
                t,
                setpoint: cfg.input.value(t),
                hard: cfg.hard_reset,
            });
        }

        let u = cfg.input.value(t);
        let w = noise.as_ref().map_or(0.0, |ns| ns.at(t));
        w_max = w_max.max(w.abs());
        let y_clean = plant.output(&x, u);
        let y = y_clean + w;
        let omega = reg.omega.clone();

        if t > IDENTITY_AFTER {
            identity_residual = identity_residual.max((y_clean - theta.as_vector().dot(&omega)).abs());
        }
        while next_rank < cfg.rank_times.len() && cfg.rank_times[next_rank] <= t + 0.5 * dt {
            rank_samples.push(omega.clone());
            next_rank += 1;
        }
        if want_pe && t >= pe_from - 0.5 * dt && k % PE_STRIDE == 0 {
            pe_log.push(t, omega.clone());
        }

        if let Some(r) = est.rls.as_mut() {
            r.step(&ext, dt).map_err(at)?;
        }
        if let Some(g) = est.grad.as_mut() {
            g.gradient_step(&omega, y, dt).map_err(at)?;
        }
        if let Some((p, pi_ext)) = est.pi.as_mut() {
            p.integrator_pi_step(pi_ext, dt).map_err(at)?;
            pi_ext.step(&omega, y, dt).map_err(at)?;
        }
        ext.step(&omega, y, dt).map_err(at)?;
        reg.step(&filter, u, y, dt);
        x = plant.euler_step(&x, u, dt);

        let t1 = (k + 1) as f64 * dt;
        est.record(&theta, &mut trace).map_err(at)?;
        let lam = linalg::lambda_min(&ext.omega);
        ie.observe(t1, &ext.omega);
        trace.lam_min.push(lam);
        trace.det.push(ext.omega.determinant());
        if lam_min_fixed.is_none() && t1 >= cfg.fixed_t - 0.5 * dt {
            lam_min_fixed = Some(lam);
        }
    }

    let rank_w = if rank_samples.is_empty() {
        0
    } else {
        excitation::check_ie_rank(&rank_samples, excitation::DEFAULT_RANK_TOL)?
    };
    let pe_met_window = if want_pe && pe_log.span() + 1e-9 >= cfg.pe_window {
        Some(excitation::check_pe_window(&pe_log, cfg.pe_window, cfg.ie_threshold)?)
    } else {
        None
    };
    let excitation = ExcitationReport {
        ie_met: ie.t_detect().is_some(),
        t_detect: ie.t_detect(),
        alpha: ie.alpha(),
        pe_met_window,
        rank_w,
    };

    let bounds = match (&est.rls, ie.t_detect()) {
        (Some(r), Some(big_t)) if cfg.beta > 0.0 => Some(bounds_report(
            cfg,
            r,
            &ext,
            big_t,
            ie.alpha(),
            w_max,
            &plant,
            &filter,
            *trace.lam_min.last().unwrap_or(&0.0),
        )?),
        _ => None,
    };

    let time_to_threshold = trace
        .err_rls
        .iter()
        .position(|&e| e <= CONVERGED_FRACTION * initial_error)
        .map(|k| k as f64 * dt);

    let mut result = RunResult {
        config: cfg.clone(),
        theta,
        initial_error,
        series: decimate(&trace, cfg, n),
        excitation,
        bounds,
        checks: Vec::new(),
        resets,
        theta_hat_rls: est.rls.as_ref().map(|r| r.theta_hat.clone()),
        time_to_threshold,
        lam_min_omega_fixed: lam_min_fixed,
        omega_bound_violations: ext.bound_violations(),
        worst_omega_ratio: ext.worst_bound_ratio(),
        identity_residual,
        w_max,
    };
    result.checks = cfg
        .checks
        .iter()
        .map(|&c| evaluate(c, &result, &trace, n))
        .collect();
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn bounds_report(
    cfg: &ExperimentConfig,
    rls: &RlsMre,
    ext: &ExtendedRegression,
    big_t: f64,
    alpha: f64,
    w_max: f64,
    plant: &PlantModel,
    filter: &LambdaFilter,
    lam_min_end: f64,
) -> Result<BoundsReport> {
    let dim = ext.dim();
    let (lam_min_ginv, lam_max_ginv) = rls.gamma_inv_extremes();
    let kappa = bounds::kappa(alpha, cfg.lambda_f, lam_min_ginv, lam_max_ginv)?;
    let delta = ext.delta();
    let x0_norm = plant.x0().norm();
    let eps_max = epsilon_max_estimate(x0_norm, w_max, delta, cfg.beta, plant, filter)?;
    let ub = bounds::ultimate_bound_r(delta, cfg.beta, eps_max, dim, kappa, lam_min_ginv, lam_max_ginv)?;
    let l0 = dim as f64 * cfg.gamma0 * cfg.gamma0;
    let gamma_limit = if lam_min_end > 0.0 {
        bounds::gamma_norm_limit(cfg.lambda_f, lam_min_end)?
    } else {
        f64::NAN
    };
    Ok(BoundsReport {
        delta,
        omega_cap: ext.omega_cap(),
        eps_max,
        kappa,
        r_small: ub.r,
        r_ultimate: ub.big_r,
        gamma_pre_t: bounds::gamma_pre_t_bound(l0, cfg.lambda_f, big_t, 0.0)?,
        gamma_limit,
        t_used: big_t,
        lam_min_omega_t: alpha,
        lam_min_ginv,
        lam_max_ginv,
    })
}

fn decimate(trace: &Trace, cfg: &ExperimentConfig, n: usize) -> Series {
    let keep: Vec<usize> = (1..=n).filter(|k| k % cfg.decimate == 0 || *k == n).collect();
    let pick = |v: &Vec<f64>| -> Vec<f64> {
        if v.is_empty() {
            Vec::new()
        } else {
            keep.iter().map(|&k| v[k]).collect()
        }
    };
    Series {
        t: keep.iter().map(|&k| k as f64 * cfg.dt).collect(),
        err_rls: pick(&trace.err_rls),
        err_grad: pick(&trace.err_grad),
        err_pi: pick(&trace.err_pi),
        norm_gamma: pick(&trace.gamma_norm),
        lam_min_omega: pick(&trace.lam_min),
        det_omega: pick(&trace.det),
    }
}

fn evaluate(kind: CheckKind, r: &RunResult, trace: &Trace, n: usize) -> CheckOutcome {
    let name = kind.label();
    let na = |why: &str| CheckOutcome::new(name, false, format!("not applicable: {why}"));
    let cfg = &r.config;
    let dt = cfg.dt;
    let init = r.initial_error;
    let t_detect = r.excitation.t_detect;
    let k_detect = t_detect.map(|t| (t / dt).round() as usize);
    let l0 = r.theta.dim() as f64 * cfg.gamma0 * cfg.gamma0;

    match kind {
        CheckKind::OmegaBound => {
            if cfg.beta <= 0.0 {
                return na("beta = 0");
            }
            CheckOutcome::new(
                name,
                r.omega_bound_violations == 0,
                format!(
                    "violations = {}, max lambda_max(Omega)/(delta^2/beta) = {:.4}",
                    r.omega_bound_violations, r.worst_omega_ratio
                ),
            )
        }
        CheckKind::RegressionIdentity => {
            if cfg.t_end <= IDENTITY_AFTER {
                return na("horizon shorter than 5 s");
            }
            CheckOutcome::new(
                name,
                r.identity_residual < IDENTITY_TOL,
                format!("max |y - theta^T omega| after 5 s = {:.3e}", r.identity_residual),
            )
        }
        CheckKind::RlsConverged => match trace.err_rls.last() {
            None => na("rls_mre not run"),
            Some(&e) => CheckOutcome::new(
                name,
                e <= CONVERGED_FRACTION * init,
                format!("final/initial = {:.3e}", e / init),
            ),
        },
        CheckKind::GradientStalled => match trace.err_grad.last() {
            None => na("gradient not run"),
            Some(&e) => CheckOutcome::new(
                name,
                e >= STALLED_FRACTION * init,
                format!("final/initial = {:.3e}", e / init),
            ),
        },
        CheckKind::LyapunovRate => {
            let (Some(b), Some(kt)) = (&r.bounds, k_detect) else {
                return na("no excitation or no rls_mre");
            };
            let Some(v_t) = trace.v[kt] else {
                return na("Gamma not invertible at T");
            };
            worst_ratio(name, trace, kt, n, dt, |t| {
                (1.0 + BOUND_SLACK) * v_t * (-b.kappa * (t - b.t_used)).exp()
            })
        }
        CheckKind::DisturbedRate => {
            let (Some(b), Some(kt)) = (&r.bounds, k_detect) else {
                return na("no excitation or no rls_mre");
            };
            let Some(v_t) = trace.v[kt] else {
                return na("Gamma not invertible at T");
            };
            let dim = r.theta.dim();
            worst_ratio(name, trace, kt, n, dt, |t| {
                let rhs = bounds::disturbed_lyapunov_bound(
                    v_t, b.kappa, t, b.t_used, b.delta, cfg.beta, b.eps_max, b.lam_max_ginv, dim,
                )
                .unwrap_or(f64::NAN);
                (1.0 + BOUND_SLACK) * rhs
            })
        }
        CheckKind::GammaPreTBound | CheckKind::GammaGrowthEnvelope => {
            if trace.gamma_norm.is_empty() {
                return na("rls_mre not run");
            }
            let Some(big_t) = t_detect else {
                return na("excitation never detected");
            };
            let kt = k_detect.unwrap_or(0);
            let mut first_violation = None;
            let mut worst = 0.0f64;
            for k in 0..kt.min(trace.gamma_norm.len()) {
                let t = k as f64 * dt;
                let bound = if kind == CheckKind::GammaPreTBound {
                    bounds::gamma_pre_t_bound(l0, cfg.lambda_f, big_t, t).unwrap_or(f64::NAN)
                } else {
                    (1.0 + BOUND_SLACK) * bounds::gamma_growth_envelope(l0, cfg.lambda_f, t)
                };
                let ratio = trace.gamma_norm[k] / bound;
                worst = worst.max(ratio);
                if !(ratio <= 1.0) && first_violation.is_none() {
                    first_violation = Some(t);
                }
            }
            let detail = match first_violation {
                None => format!("T = {big_t:.4} s, max ||Gamma||/bound = {worst:.4}"),
                Some(tv) => format!("T = {big_t:.4} s, first violation at t = {tv:.4} s, max ||Gamma||/bound = {worst:.4}"),
            };
            CheckOutcome::new(name, first_violation.is_none(), detail)
        }
        CheckKind::GammaLimit => {
            let Some(&g_end) = trace.gamma_norm.last() else {
                return na("rls_mre not run");
            };
            let lam_end = *trace.lam_min.last().unwrap_or(&0.0);
            let Ok(limit) = bounds::gamma_norm_limit(cfg.lambda_f, lam_end) else {
                return na("Omega(t_end) not positive definite");
            };
            let rel = (g_end - limit).abs() / limit;
            CheckOutcome::new(
                name,
                rel <= BOUND_SLACK,
                format!("||Gamma(t_end)|| = {g_end:.6e}, limit = {limit:.6e}, rel = {rel:.3e}"),
            )
        }
        CheckKind::PiDrift => {
            if trace.err_pi.is_empty() {
                return na("integrator_pi not run");
            }
            let mid = trace.err_pi[n / 2];
            let end = trace.err_pi[n];
            CheckOutcome::new(name, end > mid, format!("at t_end/2 = {mid:.6e}, at t_end = {end:.6e}"))
        }
        CheckKind::UltimateBound => {
            let Some(b) = &r.bounds else {
                return na("no excitation or no rls_mre");
            };
            let sup = trace.err_rls[2 * n / 3..].iter().copied().fold(0.0, f64::max);
            CheckOutcome::new(
                name,
                sup <= b.r_ultimate,
                format!("sup ||theta~|| over final third = {sup:.6e}, R = {:.6e}", b.r_ultimate),
            )
        }
        CheckKind::IeNotPe => {
            let ex = &r.excitation;
            let Some(pe) = ex.pe_met_window else {
                return na("horizon shorter than the PE window");
            };
            let full = r.theta.dim();
            CheckOutcome::new(
                name,
                !pe && ex.ie_met && ex.rank_w == full,
                format!(
                    "late PE windows pass = {pe}, rank W = {}/{full}, IE via Omega = {}",
                    ex.rank_w, ex.ie_met
                ),
            )
        }
    }
}

/// Compares `V(t)` with `bound(t)` on every step from `kt` onward.
fn worst_ratio(
    name: &str,
    trace: &Trace,
    kt: usize,
    n: usize,
    dt: f64,
    bound: impl Fn(f64) -> f64,
) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for k in kt..=n {
        let t = k as f64 * dt;
        let Some(v) = trace.v[k] else {
            violations += 1;
            continue;
        };
        let ratio = v / bound(t);
        worst = worst.max(ratio);
        if !(ratio <= 1.0) {
            violations += 1;
        }
    }
    CheckOutcome::new(
        name,
        violations == 0,
        format!("violations = {violations}, max V/bound = {worst:.4e}"),
    )
}

/// Runs every sweep member (concurrently) and compares them.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let sweep = config
        .sweep
        .clone()
        .ok_or_else(|| Error::InvalidConfig("no sweep configured".into()))?;
    let members: Vec<ExperimentConfig> = sweep
        .values
        .iter()
        .map(|&v| config.with_sweep_value(sweep.param, v))
        .collect();

    let results: Vec<Result<RunResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = members.iter().map(|m| s.spawn(move || run(m))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep member panicked"))
            .collect()
    });
    let members = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| sweep.values[a].total_cmp(&sweep.values[b]));
    let sorted = |f: &dyn Fn(&RunResult) -> Option<f64>| -> Vec<Option<f64>> {
        order.iter().map(|&i| f(&members[i])).collect()
    };
    let p = sweep.param.name();

    let mut checks = Vec::new();
    match sweep.param {
        SweepParam::LambdaF => {
            let tt = sorted(&|r| r.time_to_threshold);
            checks.push(monotone(
                format!("time_to_threshold decreasing in {p}"),
                &tt,
                |a, b| b < a,
            ));
        }
        SweepParam::Beta => {
            let lm = sorted(&|r| r.lam_min_omega_fixed);
            checks.push(monotone(
                format!("lam_min_Omega(T={}) decreasing in {p}", config.fixed_t),
                &lm,
                |a, b| b < a,
            ));
            if config.noise.is_none() {
                let tt = sorted(&|r| r.time_to_threshold);
                checks.push(monotone(
                    format!("time_to_threshold increasing in {p}"),
                    &tt,
                    |a, b| b > a,
                ));
            }
        }
    }

    Ok(SweepResult {
        config: config.clone(),
        param: sweep.param,
        values: sweep.values,
        members,
        checks,
    })
}

fn monotone(name: String, vals: &[Option<f64>], ok: impl Fn(f64, f64) -> bool) -> CheckOutcome {
    let shown: Vec<String> = vals
        .iter()
        .map(|v| v.map_or("none".into(), |x| format!("{x:.6e}")))
        .collect();
    let passed = vals.iter().all(Option::is_some)
        && vals.windows(2).all(|w| ok(w[0].unwrap_or(f64::NAN), w[1].unwrap_or(f64::NAN)));
    CheckOutcome::new(name, passed, format!("values by ascending parameter: {}", shown.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::InputSpec;

    fn short(t_end: f64) -> ExperimentConfig {
        ExperimentConfig {
            t_end,
            estimators: EstimatorKind::ALL.to_vec(),
            checks: vec![CheckKind::OmegaBound],
            decimate: 10,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn series_lengths_follow_decimation() {
        let r = run(&short(0.5)).unwrap();
        assert_eq!(r.series.len(), 500);
        assert_eq!(r.series.err_pi.len(), 500);
        let mut c = short(0.5);
        c.decimate = 1;
        assert_eq!(run(&c).unwrap().series.len(), 5000);
        c.decimate = 3000;
        assert_eq!(run(&c).unwrap().series.t, vec![0.3, 0.5]);
    }

    #[test]
    fn zero_input_does_not_adapt() {
        let mut c = short(1.0);
        c.input = InputSpec::Constant(0.0);
        let r = run(&c).unwrap();
        for col in [&r.series.err_rls, &r.series.err_grad, &r.series.err_pi] {
            assert!(col.iter().all(|&e| e == r.initial_error));
        }
        assert!(!r.excitation.ie_met);
        assert!(r.bounds.is_none());
    }

    #[test]
    fn schedule_changes_log_resets() {
        let mut c = short(1.0);
        c.input = InputSpec::Schedule(vec![(0.0, 100.0), (0.4, 50.0), (0.7, 80.0)]);
        let r = run(&c).unwrap();
        let times: Vec<f64> = r.resets.iter().map(|e| e.t).collect();
        assert_eq!(r.resets.len(), 2);
        assert!((times[0] - 0.4).abs() < 1e-9 && (times[1] - 0.7).abs() < 1e-9);
        assert_eq!(r.resets[1].setpoint, 80.0);
    }

    #[test]
    fn not_applicable_checks_fail() {
        let mut c = short(0.5);
        c.estimators = vec![EstimatorKind::Gradient];
        c.checks = vec![CheckKind::GammaLimit, CheckKind::PiDrift];
        let r = run(&c).unwrap();
        assert!(r.checks.iter().all(|o| !o.passed && o.detail.starts_with("not applicable")));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut c = short(0.5);
        c.lambdas = vec![1.0];
        assert!(matches!(run(&c), Err(Error::OrderMismatch { .. })));
    }
}
