//! Convergence-rate and ultimate-bound constants for the RLS-MRE estimator.

use crate::error::{Error, Result};

/// `κ = (λ_min(Ω(T))² + λ·λ_min(Γ⁻¹)) / λ_max(Γ⁻¹)`.
pub fn kappa(
    lambda_min_omega_t: f64,
    lambda_f: f64,
    lambda_min_gamma_inv: f64,
    lambda_max_gamma_inv: f64,
) -> Result<f64> {
    check_eigs(lambda_min_gamma_inv, lambda_max_gamma_inv)?;
    if lambda_f < 0.0 {
        return Err(Error::NonPositiveInput("lambda_f"));
    }
    Ok((lambda_min_omega_t.powi(2) + lambda_f * lambda_min_gamma_inv) / lambda_max_gamma_inv)
}

fn check_eigs(min: f64, max: f64) -> Result<()> {
    if !(min > 0.0) || !(max > 0.0) || min > max {
        return Err(Error::NonPositiveEigen { min, max });
    }
    Ok(())
}

/// Radii of the residual set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltimateBound {
    /// Radius for `‖θ̃‖` measured in the `Γ⁻¹`-weighted norm, rescaled.
    pub r: f64,
    /// Euclidean radius `R = r·√(λ_max(Γ⁻¹)/λ_min(Γ⁻¹))`.
    pub big_r: f64,
}

/// `r = 2δ²β⁻¹·ε_max·√dim / (κ·λ_max(Γ⁻¹))` and the matching `R`.
#[allow(clippy::too_many_arguments)]
pub fn ultimate_bound_r(
    delta: f64,
    beta: f64,
    eps_max: f64,
    dim: usize,
    kappa: f64,
    lambda_min_gamma_inv: f64,
    lambda_max_gamma_inv: f64,
) -> Result<UltimateBound> {
    check_eigs(lambda_min_gamma_inv, lambda_max_gamma_inv)?;
    if !(beta > 0.0) {
        return Err(Error::BetaNonPositive(beta));
    }
    if !(kappa > 0.0) {
        return Err(Error::NonPositiveInput("kappa"));
    }
    if eps_max < 0.0 {
        return Err(Error::NonPositiveInput("eps_max"));
    }
    let r = 2.0 * delta * delta / beta * eps_max * (dim as f64).sqrt()
        / (kappa * lambda_max_gamma_inv);
    let big_r = r * (lambda_max_gamma_inv / lambda_min_gamma_inv).sqrt();
    Ok(UltimateBound { r, big_r })
}

/// Limit of `‖Γ‖` under a frozen, excited `Ω`: `λ / λ_min(Ω)²`.
pub fn gamma_norm_limit(lambda_f: f64, lambda_min_omega: f64) -> Result<f64> {
    if !(lambda_min_omega > 0.0) {
        return Err(Error::ZeroExcitation);
    }
    Ok(lambda_f / (lambda_min_omega * lambda_min_omega))
}

/// `√(e^{2λ(T−t)}·L0)` with `L0 = tr(Γ₀ᵀΓ₀)`, valid for `t < T`.
pub fn gamma_pre_t_bound(l0: f64, lambda_f: f64, big_t: f64, t: f64) -> Result<f64> {
    if t >= big_t {
        return Err(Error::TOrderViolation { t, big_t });
    }
    Ok(((2.0 * lambda_f * (big_t - t)).exp() * l0).sqrt())
}

/// `√(e^{2λt}·L0)`: growth envelope of `‖Γ‖_F` while `Ω` is not yet excited.
pub fn gamma_growth_envelope(l0: f64, lambda_f: f64, t: f64) -> f64 {
    ((2.0 * lambda_f * t).exp() * l0).sqrt()
}

/// Right-hand side of the disturbed Lyapunov estimate for `t ≥ T`:
///
/// ```text
/// e^{-κ(t−T)/2}·V(T) + 4δ⁴β⁻²·ε_max²·dim / (κ²·λ_max(Γ⁻¹))
/// ```
#[allow(clippy::too_many_arguments)]
pub fn disturbed_lyapunov_bound(
    v_t: f64,
    kappa: f64,
    t: f64,
    big_t: f64,
    delta: f64,
    beta: f64,
    eps_max: f64,
    lambda_max_gamma_inv: f64,
    dim: usize,
) -> Result<f64> {
    if t < big_t {
        return Err(Error::TOrderViolation { t, big_t });
    }
    if !(kappa > 0.0) {
        return Err(Error::NonPositiveInput("kappa"));
    }
    if !(beta > 0.0) {
        return Err(Error::BetaNonPositive(beta));
    }
    let decay = (-0.5 * kappa * (t - big_t)).exp() * v_t;
    let floor = 4.0 * delta.powi(4) / (beta * beta) * eps_max * eps_max * dim as f64
        / (kappa * kappa * lambda_max_gamma_inv);
    Ok(decay + floor)
}

/// Constants evaluated for one run. `Γ⁻¹` extremes are taken at the end of
/// the run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub delta: f64,
    pub omega_cap: f64,
    pub eps_max: f64,
    pub kappa: f64,
    pub r_small: f64,
    pub r_ultimate: f64,
    /// `gamma_pre_t_bound` at `t = 0`.
    pub gamma_pre_t: f64,
    pub gamma_limit: f64,
    pub t_used: f64,
    pub lam_min_omega_t: f64,
    pub lam_min_ginv: f64,
    pub lam_max_ginv: f64,
}
