//! Adaptation laws.
//!
//! [`RlsMre`] integrates the coupled least-squares loop on the extended
//! regression,
//!
//! ```text
//! θ̂' = −Γ Ω (Ωθ̂ − Υ)
//! Γ'  = λΓ − Γ Ω Ωᵀ Γ
//! ```
//!
//! propagating `Γ` directly so that `Γ⁻¹` is never formed. [`BaselineState`]
//! carries the constant-gain gradient and integrator baselines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::mre::ExtendedRegression;
use crate::regressor::TrueTheta;

/// Positivity of `Γ` is verified by Cholesky every this many steps.
pub const DEFAULT_SPD_CHECK_EVERY: usize = 100;

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Parameter estimate and adaptation-rate matrix of the least-squares loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RlsMre {
    pub theta_hat: DVector<f64>,
    pub gamma: DMatrix<f64>,
    lambda_f: f64,
    t: f64,
    steps: usize,
    check_every: usize,
}

impl RlsMre {
    /// `θ̂(0) = 0`, `Γ(0) = gamma0·I`.
    pub fn new(dim: usize, gamma0: f64, lambda_f: f64) -> Result<Self> {
        if !(gamma0 > 0.0) {
            return Err(Error::NonPositiveInput("gamma0"));
        }
        Self::with_initial(DVector::zeros(dim), DMatrix::identity(dim, dim) * gamma0, lambda_f)
    }

    /// Arbitrary symmetric positive definite `Γ(0)` and initial estimate.
    pub fn with_initial(theta_hat: DVector<f64>, gamma: DMatrix<f64>, lambda_f: f64) -> Result<Self> {
        check_dim(theta_hat.len(), gamma.nrows())?;
        check_dim(gamma.nrows(), gamma.ncols())?;
        if !(lambda_f >= 0.0) {
            return Err(Error::NonPositiveInput("lambda_f"));
        }
        if !linalg::is_symmetric(&gamma, 1e-12) || !linalg::is_positive_definite(&gamma) {
            return Err(Error::GammaNotPositiveDefinite);
        }
        Ok(Self {
            theta_hat,
            gamma,
            lambda_f,
            t: 0.0,
            steps: 0,
            check_every: DEFAULT_SPD_CHECK_EVERY,
        })
    }

    /// Cholesky check period for `Γ`; `1` checks every step.
    pub fn check_every(mut self, steps: usize) -> Self {
        self.check_every = steps.max(1);
        self
    }

    pub fn lambda_f(&self) -> f64 {
        self.lambda_f
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.theta_hat.len()
    }

    /// One explicit Euler step of the loop driven by `(Ω, Υ)`.
    pub fn step(&mut self, ext: &ExtendedRegression, dt: f64) -> Result<()> {
        check_dim(self.dim(), ext.dim())?;
        let omega = &ext.omega;

        // Ỹᵀ = Ωθ̂ − Υ
        let mut err = omega * &self.theta_hat;
        err -= &ext.upsilon;
        let g_omega = &self.gamma * omega;
        let dtheta = &g_omega * err;

        // ΓΩΩᵀΓ = (ΓΩ)(ΓΩ)ᵀ since Ω and Γ are symmetric
        let mut dgamma = &self.gamma * self.lambda_f;
        dgamma.gemm(-1.0, &g_omega, &g_omega.transpose(), 1.0);

        self.theta_hat.axpy(-dt, &dtheta, 1.0);
        self.gamma += dgamma * dt;
        linalg::symmetrize(&mut self.gamma);
        self.t += dt;
        self.steps += 1;

        if self.steps % self.check_every == 0 && !linalg::is_positive_definite(&self.gamma) {
            return Err(Error::GammaLostPositivity { t: self.t });
        }
        Ok(())
    }

    /// Frobenius norm `‖Γ‖ = sqrt(tr(ΓᵀΓ))`.
    pub fn gamma_norm(&self) -> f64 {
        linalg::frobenius(&self.gamma)
    }

    /// Eigen-extremes `(λ_min, λ_max)` of `Γ⁻¹`, as reciprocals of those of `Γ`.
    pub fn gamma_inv_extremes(&self) -> (f64, f64) {
        let eig = linalg::sym_eigenvalues(&self.gamma);
        let lo = eig.first().copied().unwrap_or(f64::NAN);
        let hi = eig.last().copied().unwrap_or(f64::NAN);
        (1.0 / hi, 1.0 / lo)
    }

    /// Lyapunov value `θ̃ᵀΓ⁻¹θ̃`, computed with a linear solve.
    pub fn lyapunov(&self, theta: &TrueTheta) -> Option<f64> {
        let err = &self.theta_hat - theta.as_vector();
        linalg::spd_solve(&self.gamma, &err).map(|z| err.dot(&z))
    }
}

/// Functional form of [`RlsMre::step`].
pub fn rls_mre_step(state: &RlsMre, ext: &ExtendedRegression, dt: f64) -> Result<RlsMre> {
    let mut next = state.clone();
    next.step(ext, dt)?;
    Ok(next)
}

/// Constant-gain baseline state.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineState {
    pub theta_hat: DVector<f64>,
    gamma: DMatrix<f64>,
}

impl BaselineState {
    /// `θ̂(0) = 0` with fixed gain `gamma0·I`.
    pub fn new(dim: usize, gamma0: f64) -> Result<Self> {
        if !(gamma0 > 0.0) {
            return Err(Error::NonPositiveInput("gamma0"));
        }
        Self::with_gain(DVector::zeros(dim), DMatrix::identity(dim, dim) * gamma0)
    }

    pub fn with_gain(theta_hat: DVector<f64>, gamma: DMatrix<f64>) -> Result<Self> {
        check_dim(theta_hat.len(), gamma.nrows())?;
        check_dim(gamma.nrows(), gamma.ncols())?;
        if !linalg::is_symmetric(&gamma, 1e-12) || !linalg::is_positive_definite(&gamma) {
            return Err(Error::GammaNotPositiveDefinite);
        }
        Ok(Self { theta_hat, gamma })
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.theta_hat.len()
    }

    /// Gradient law on the raw regression: `θ̂ ← θ̂ − dt·Γ·ω·(θ̂ᵀω − y)`.
    pub fn gradient_step(&mut self, omega: &DVector<f64>, y: f64, dt: f64) -> Result<()> {
        check_dim(self.dim(), omega.len())?;
        let e = self.theta_hat.dot(omega) - y;
        let g = &self.gamma * omega;
        self.theta_hat.axpy(-dt * e, &g, 1.0);
        Ok(())
    }

    /// Integrator-filter law `θ̂' = −Γ·Ω·(Ωθ̂ − Υ)` on a `β = 0` pair.
    ///
    /// With `β = 0` the pair grows without bound, so the stiffness `ΓΩ²`
    /// eventually exceeds the explicit-Euler stability limit `2/dt`. The
    /// step is therefore linearly implicit in `θ̂`:
    /// `(I + dt·ΓΩ²) θ̂⁺ = θ̂ + dt·ΓΩΥ`.
    pub fn integrator_pi_step(&mut self, ext: &ExtendedRegression, dt: f64) -> Result<()> {
        check_dim(self.dim(), ext.dim())?;
        let n = self.dim();
        let g_omega = &self.gamma * &ext.omega;
        let mut lhs = DMatrix::identity(n, n);
        lhs.gemm(dt, &g_omega, &ext.omega, 1.0);
        let mut rhs = self.theta_hat.clone();
        rhs.gemv(dt, &g_omega, &ext.upsilon, 1.0);
        // I + dt·ΓΩ² is similar to I + dt·Γ^{1/2}Ω²Γ^{1/2}, hence never singular
        self.theta_hat = lhs
            .lu()
            .solve(&rhs)
            .expect("I + dt·ΓΩ² is nonsingular for SPD Γ");
        Ok(())
    }
}

/// Functional form of [`BaselineState::gradient_step`].
pub fn gradient_step(state: &BaselineState, omega: &DVector<f64>, y: f64, dt: f64) -> Result<BaselineState> {
    let mut next = state.clone();
    next.gradient_step(omega, y, dt)?;
    Ok(next)
}

/// Functional form of [`BaselineState::integrator_pi_step`].
pub fn integrator_pi_step(state: &BaselineState, ext_beta0: &ExtendedRegression, dt: f64) -> Result<BaselineState> {
    let mut next = state.clone();
    next.integrator_pi_step(ext_beta0, dt)?;
    Ok(next)
}

/// `‖θ̂ − θ‖₂`.
pub fn parameter_error(theta_hat: &DVector<f64>, theta: &TrueTheta) -> Result<f64> {
    check_dim(theta.dim(), theta_hat.len())?;
    Ok((theta_hat - theta.as_vector()).norm())
}
