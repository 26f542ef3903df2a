//! Excitation diagnostics: persistent excitation over sliding windows,
//! initial excitation by rank of sampled regressors, and initial excitation
//! of the extended regressor `Ω` through its smallest eigenvalue.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// Default relative tolerance for [`check_ie_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Summary of the excitation checks on one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationReport {
    pub ie_met: bool,
    /// First time `λ_min(Ω) ≥` threshold.
    pub t_detect: Option<f64>,
    /// `λ_min(Ω(T))` at the detection instant, 0 when not detected.
    pub alpha: f64,
    /// Whether the last PE window check passed, when one was run.
    pub pe_met_window: Option<bool>,
    pub rank_w: usize,
}

/// `λ_min(Ω) ≥ alpha_threshold`.
pub fn check_ie_via_omega(omega: &DMatrix<f64>, alpha_threshold: f64) -> Result<bool> {
    if !linalg::is_symmetric(omega, 1e-9) {
        return Err(Error::NotSymmetric);
    }
    Ok(linalg::lambda_min(omega) >= alpha_threshold)
}

/// Numerical rank of `W = [ω(t_1) … ω(t_p)]`: singular values above
/// `tol·σ_max`.
pub fn check_ie_rank(samples: &[DVector<f64>], tol: f64) -> Result<usize> {
    let first = samples.first().ok_or(Error::EmptySamples)?;
    let dim = first.len();
    if let Some(bad) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let w = DMatrix::from_columns(samples);
    Ok(linalg::numerical_rank(&w, tol))
}

/// Time-stamped regressor samples, times strictly increasing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OmegaLog {
    pub t: Vec<f64>,
    pub omega: Vec<DVector<f64>>,
}

impl OmegaLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, omega: DVector<f64>) {
        self.t.push(t);
        self.omega.push(omega);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn span(&self) -> f64 {
        match (self.t.first(), self.t.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Samples at the first logged times at or after each requested instant.
    pub fn sample_at(&self, times: &[f64]) -> Vec<DVector<f64>> {
        times
            .iter()
            .filter_map(|&t| {
                let i = self.t.partition_point(|&s| s < t - 1e-12);
                self.omega.get(i).cloned()
            })
            .collect()
    }
}

/// Smallest `λ_min(∫_t^{t+T} ωωᵀ dτ)` over every window that starts at a
/// logged sample and fits in the log. Integrals are trapezoidal, evaluated
/// as differences of a running cumulative sum.
pub fn pe_window_min_eigen(log: &OmegaLog, window_t: f64) -> Result<f64> {
    if log.is_empty() {
        return Err(Error::EmptySamples);
    }
    let span = log.span();
    if span + 1e-12 < window_t {
        return Err(Error::LogTooShort { span, window: window_t });
    }
    let dim = log.omega[0].len();
    let mut cumulative = Vec::with_capacity(log.len());
    let mut acc = DMatrix::<f64>::zeros(dim, dim);
    cumulative.push(acc.clone());
    for k in 1..log.len() {
        let h = log.t[k] - log.t[k - 1];
        acc.ger(0.5 * h, &log.omega[k - 1], &log.omega[k - 1], 1.0);
        acc.ger(0.5 * h, &log.omega[k], &log.omega[k], 1.0);
        cumulative.push(acc.clone());
    }

    let mut worst = f64::INFINITY;
    let mut end = 0;
    for start in 0..log.len() {
        let target = log.t[start] + window_t;
        while end < log.len() && log.t[end] < target - 1e-9 {
            end += 1;
        }
        if end >= log.len() {
            break;
        }
        let mut window = &cumulative[end] - &cumulative[start];
        linalg::symmetrize(&mut window);
        worst = worst.min(linalg::lambda_min(&window));
    }
    Ok(worst)
}

/// True iff every window of length `window_t` satisfies
/// `∫ ωωᵀ ⪰ alpha·I`.
pub fn check_pe_window(log: &OmegaLog, window_t: f64, alpha: f64) -> Result<bool> {
    Ok(pe_window_min_eigen(log, window_t)? >= alpha)
}

/// Tracks the first instant at which `Ω` certifies initial excitation.
#[derive(Debug, Clone, PartialEq)]
pub struct IeMonitor {
    threshold: f64,
    t_detect: Option<f64>,
    alpha: f64,
}

impl IeMonitor {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            t_detect: None,
            alpha: 0.0,
        }
    }

    /// Feeds `Ω(t)`; returns `λ_min(Ω)` when it had to be computed.
    pub fn observe(&mut self, t: f64, omega: &DMatrix<f64>) -> Option<f64> {
        if self.t_detect.is_some() {
            return None;
        }
        let lmin = linalg::lambda_min(omega);
        if lmin >= self.threshold {
            self.t_detect = Some(t);
            self.alpha = lmin;
        }
        Some(lmin)
    }

    /// Clears a previous detection, e.g. after a hard reset of `Ω`.
    pub fn rearm(&mut self) {
        self.t_detect = None;
        self.alpha = 0.0;
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn t_detect(&self) -> Option<f64> {
        self.t_detect
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn log_of(f: impl Fn(f64) -> Vec<f64>, t_end: f64, dt: f64) -> OmegaLog {
        let mut log = OmegaLog::new();
        let n = (t_end / dt).round() as usize;
        for k in 0..=n {
            let t = k as f64 * dt;
            log.push(t, DVector::from_vec(f(t)));
        }
        log
    }

    #[test]
    fn ie_via_omega_examples() {
        assert!(!check_ie_via_omega(&DMatrix::zeros(3, 3), 1e-6).unwrap());
        assert!(check_ie_via_omega(&DMatrix::identity(3, 3), 0.5).unwrap());
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert_eq!(check_ie_via_omega(&skew, 0.1), Err(Error::NotSymmetric));
    }

    #[test]
    fn rank_examples() {
        let v = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(check_ie_rank(&vec![v.clone(); 5], DEFAULT_RANK_TOL).unwrap(), 1);
        let basis: Vec<_> = (0..4)
            .map(|i| DVector::from_fn(4, |j, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
        assert_eq!(check_ie_rank(&basis, DEFAULT_RANK_TOL).unwrap(), 4);
        assert_eq!(check_ie_rank(&[], DEFAULT_RANK_TOL), Err(Error::EmptySamples));
    }

    #[test]
    fn sinusoidal_regressor_is_pe() {
        let log = log_of(|t| vec![1.0, t.sin()], 40.0, 1e-3);
        assert!(check_pe_window(&log, 2.0 * PI, 0.1).unwrap());
    }

    #[test]
    fn decaying_regressor_is_ie_not_pe() {
        let log = log_of(|t| vec![1.0, (-t).exp()], 50.0, 1e-3);
        assert!(!check_pe_window(&log, 10.0, 1e-6).unwrap());
        let early: Vec<_> = log.sample_at(&[0.5, 1.0]);
        assert_eq!(check_ie_rank(&early, DEFAULT_RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn zero_regressor_is_not_pe() {
        let log = log_of(|_| vec![0.0, 0.0], 5.0, 1e-2);
        assert!(!check_pe_window(&log, 1.0, 1e-9).unwrap());
    }

    #[test]
    fn short_log_rejected() {
        let log = log_of(|_| vec![1.0], 1.0, 0.1);
        assert!(matches!(check_pe_window(&log, 2.0, 0.1), Err(Error::LogTooShort { .. })));
    }

    #[test]
    fn monitor_latches_first_detection() {
        let mut m = IeMonitor::new(0.5);
        assert_eq!(m.observe(0.0, &DMatrix::zeros(2, 2)), Some(0.0));
        m.observe(1.0, &DMatrix::identity(2, 2));
        m.observe(2.0, &(DMatrix::identity(2, 2) * 3.0));
        assert_eq!(m.t_detect(), Some(1.0));
        assert_eq!(m.alpha(), 1.0);
    }
}
