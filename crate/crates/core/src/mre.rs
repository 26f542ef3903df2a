//! Memory regressor extension.
//!
//! The scalar regression is lifted to the matrix regression `Υ = θᵀΩ + ε`
//! by accumulating
//!
//! ```text
//! Ω(t) = ∫₀ᵗ e^{-βτ} ω ωᵀ dτ,    Υ(t) = ∫₀ᵗ e^{-βτ} y ω dτ
//! ```
//!
//! with the same left-endpoint Euler rule used for the plant. The clock `τ`
//! restarts at each epoch (setpoint change); see [`ExtendedRegression::reset_epoch`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::plant::PlantModel;
use crate::regressor::{LambdaFilter, RegressorState, TrueTheta};

/// Pair `(Ω, Υ)` with its memory factor and epoch clock.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedRegression {
    pub omega: DMatrix<f64>,
    pub upsilon: DVector<f64>,
    beta: f64,
    epoch_t: f64,
    delta: f64,
    bound_violations: usize,
    worst_bound_ratio: f64,
}

impl ExtendedRegression {
    /// Zero `Ω`, `Υ` of dimension `dim` with memory factor `beta > 0`.
    pub fn new(dim: usize, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::BetaNonPositive(beta));
        }
        Ok(Self::with_beta(dim, beta))
    }

    /// The `β = 0` pair: a pure integrator with unbounded memory.
    pub fn integrator(dim: usize) -> Self {
        Self::with_beta(dim, 0.0)
    }

    fn with_beta(dim: usize, beta: f64) -> Self {
        Self {
            omega: DMatrix::zeros(dim, dim),
            upsilon: DVector::zeros(dim),
            beta,
            epoch_t: 0.0,
            delta: 0.0,
            bound_violations: 0,
            worst_bound_ratio: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.upsilon.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Time since the last reset.
    pub fn epoch_t(&self) -> f64 {
        self.epoch_t
    }

    /// Running `sup_t max_i |ω_i(t)|`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `δ²/β`, the upper bound on `λ_max(Ω)`; infinite when `β = 0`.
    pub fn omega_cap(&self) -> f64 {
        if self.beta > 0.0 {
            self.delta * self.delta / self.beta
        } else {
            f64::INFINITY
        }
    }

    /// Steps at which `λ_max(Ω) > δ²/β` was observed.
    pub fn bound_violations(&self) -> usize {
        self.bound_violations
    }

    /// Largest observed `λ_max(Ω) / (δ²/β)`.
    pub fn worst_bound_ratio(&self) -> f64 {
        self.worst_bound_ratio
    }

    /// One left-endpoint step of the filters:
    /// `Ω += dt·e^{-β·epoch_t}·ωωᵀ`, `Υ += dt·e^{-β·epoch_t}·y·ω`.
    pub fn step(&mut self, omega: &DVector<f64>, y: f64, dt: f64) -> Result<()> {
        if omega.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: omega.len(),
            });
        }
        self.delta = self.delta.max(omega.amax());
        let w = dt * (-self.beta * self.epoch_t).exp();
        self.omega.ger(w, omega, omega, 1.0);
        linalg::symmetrize(&mut self.omega);
        self.upsilon.axpy(w * y, omega, 1.0);
        self.epoch_t += dt;
        self.check_cap();
        Ok(())
    }

    fn check_cap(&mut self) {
        let cap = self.omega_cap();
        if !cap.is_finite() {
            return;
        }
        let lmax = linalg::lambda_max(&self.omega);
        if cap > 0.0 {
            self.worst_bound_ratio = self.worst_bound_ratio.max(lmax / cap);
        }
        if lmax > cap {
            self.bound_violations += 1;
        }
    }

    /// Restarts the exponential clock. `Ω` and `Υ` are kept unless `hard`
    /// is set, in which case both return to zero.
    pub fn reset_epoch(&mut self, hard: bool) {
        self.epoch_t = 0.0;
        if hard {
            self.omega.fill(0.0);
            self.upsilon.fill(0.0);
        }
    }

    /// `ε = Υ − Ωθ`, the lumped disturbance given the true parameters.
    pub fn disturbance(&self, theta: &TrueTheta) -> DVector<f64> {
        &self.upsilon - &self.omega * theta.as_vector()
    }
}

/// Functional form of [`ExtendedRegression::step`].
pub fn mre_step(
    ext: &ExtendedRegression,
    omega: &DVector<f64>,
    y: f64,
    dt: f64,
) -> Result<ExtendedRegression> {
    let mut next = ext.clone();
    next.step(omega, y, dt)?;
    Ok(next)
}

/// Functional form of [`ExtendedRegression::reset_epoch`].
pub fn reset_epoch(ext: &ExtendedRegression, hard: bool) -> ExtendedRegression {
    let mut next = ext.clone();
    next.reset_epoch(hard);
    next
}

const EPS_DT: f64 = 1e-4;

/// Upper estimate of `sup_t max_i |ε_i(t)|`:
///
/// ```text
/// ε_max = δ·‖x0‖·∫₀^∞ e^{-βτ} ‖h(τ)‖ dτ + δ·w_max/β
/// ```
///
/// where `η₀(t) = h(t)ᵀx0` is the initial-condition residual of the
/// regression. Column `j` of `h` is measured by simulating the plant from
/// `x0 = e_j` with `u = 0`, `w = 0` through the filter bank and recording
/// `y − θᵀω`.
pub fn epsilon_max_estimate(
    x0_norm: f64,
    w_max: f64,
    delta: f64,
    beta: f64,
    plant: &PlantModel,
    filter: &LambdaFilter,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::BetaNonPositive(beta));
    }
    let noise_term = delta * w_max.abs() / beta;
    if x0_norm == 0.0 || delta == 0.0 {
        return Ok(noise_term);
    }
    Ok(delta * x0_norm.abs() * initial_condition_integral(beta, plant, filter)? + noise_term)
}

/// `∫₀^∞ e^{-βτ} ‖h(τ)‖ dτ` by rectangle rule at `dt = 1e-4`.
fn initial_condition_integral(beta: f64, plant: &PlantModel, filter: &LambdaFilter) -> Result<f64> {
    let n = plant.order();
    let theta = TrueTheta::for_plant(plant, filter)?;
    let horizon = (30.0 / beta).min(200.0);
    let steps = (horizon / EPS_DT).ceil() as usize;

    let mut states: Vec<(DVector<f64>, RegressorState)> = (0..n)
        .map(|j| {
            let x = DVector::from_fn(n, |i, _| if i == j { 1.0 } else { 0.0 });
            RegressorState::new(filter, plant.num_degree()).map(|r| (x, r))
        })
        .collect::<Result<_>>()?;

    let mut integral = 0.0;
    for k in 0..steps {
        let t = k as f64 * EPS_DT;
        let mut h2 = 0.0;
        for (x, reg) in states.iter_mut() {
            let y = plant.output(x, 0.0);
            let eta = y - theta.as_vector().dot(&reg.omega);
            h2 += eta * eta;
            reg.step(filter, 0.0, y, EPS_DT);
            *x = plant.euler_step(x, 0.0, EPS_DT);
        }
        integral += EPS_DT * (-beta * t).exp() * h2.sqrt();
    }
    Ok(integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_regressor_keeps_zero_pair() {
        let mut ext = ExtendedRegression::new(3, 2.0).unwrap();
        let z = DVector::zeros(3);
        for _ in 0..100 {
            ext.step(&z, 1.0, 0.01).unwrap();
        }
        assert!(ext.omega.iter().all(|&v| v == 0.0));
        assert!(ext.upsilon.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scalar_closed_form() {
        let dt = 1e-4;
        let mut ext = ExtendedRegression::new(1, 2.0).unwrap();
        let one = DVector::from_element(1, 1.0);
        for _ in 0..10_000 {
            ext.step(&one, 1.0, dt).unwrap();
        }
        let exact = (1.0 - (-2.0f64).exp()) / 2.0;
        assert!((ext.omega[(0, 0)] - exact).abs() < dt);
        assert!((ext.upsilon[0] - exact).abs() < dt);
    }

    #[test]
    fn reset_restarts_weight_only() {
        let dt = 1e-3;
        let mut ext = ExtendedRegression::new(1, 1.0).unwrap();
        let one = DVector::from_element(1, 1.0);
        for _ in 0..3000 {
            ext.step(&one, 0.0, dt).unwrap();
        }
        let before = ext.omega[(0, 0)];
        ext.reset_epoch(false);
        assert_eq!(ext.omega[(0, 0)], before);
        assert_eq!(ext.epoch_t(), 0.0);
        ext.step(&one, 0.0, dt).unwrap();
        assert_relative_eq!(ext.omega[(0, 0)] - before, dt, epsilon = 1e-15);

        let frozen = ext.clone();
        for _ in 0..100 {
            ext.step(&DVector::zeros(1), 0.0, dt).unwrap();
        }
        assert_eq!(ext.omega, frozen.omega);

        ext.reset_epoch(true);
        assert_eq!(ext.omega[(0, 0)], 0.0);
        assert_eq!(ext.upsilon[0], 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(ExtendedRegression::new(2, 0.0), Err(Error::BetaNonPositive(0.0)));
        let mut ext = ExtendedRegression::new(2, 1.0).unwrap();
        assert!(ext.step(&DVector::zeros(3), 0.0, 0.1).is_err());
        let plant = PlantModel::from_tf(&[1.0], &[1.0, 1.0]).unwrap();
        let f = LambdaFilter::new(&[1.0]).unwrap();
        assert!(epsilon_max_estimate(0.0, 0.0, 1.0, -1.0, &plant, &f).is_err());
    }

    #[test]
    fn epsilon_max_trivial_cases() {
        let plant = PlantModel::from_tf(&[4.0, 1.0], &[1.0, 1.0, 4.0]).unwrap();
        let f = LambdaFilter::new(&[15.0, 45.0]).unwrap();
        assert_eq!(epsilon_max_estimate(0.0, 0.0, 6.0, 2.0, &plant, &f).unwrap(), 0.0);
        let e = epsilon_max_estimate(0.0, 3.0, 6.0, 2.0, &plant, &f).unwrap();
        assert!(e <= 6.0 * 3.0 / 2.0 + 1e-12);
    }

    #[test]
    fn integrator_pair_has_no_cap() {
        let mut ext = ExtendedRegression::integrator(1);
        let one = DVector::from_element(1, 10.0);
        for _ in 0..1000 {
            ext.step(&one, 0.0, 0.1).unwrap();
        }
        assert_eq!(ext.bound_violations(), 0);
        assert!((ext.omega[(0, 0)] - 10_000.0).abs() < 1e-6);
    }
}
