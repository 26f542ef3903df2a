//! State-variable filters and the linear regression `y = θᵀω + η₀ + w`.
//!
//! Both `u` and `y` are passed through the same bank `sⁱ/Λ(s)`,
//! `i = 0..n-1`, realized in companion form so that state component `i` is
//! exactly the `i`-th tap. The regressor stacks the input taps `m..0` and the
//! negated output taps `n-1..0`:
//!
//! ```text
//! ω = [ sᵐ/Λ u, …, 1/Λ u, −sⁿ⁻¹/Λ y, …, −1/Λ y ]
//! θ = [ b_m, …, b_0, a_{n-1} − λ_{n-1}, …, a_0 − λ_0 ]
//! ```

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg;
use crate::plant::PlantModel;

/// Filter bank `sⁱ/Λ(s)` with `Λ(s) = sⁿ + λ_{n-1}sⁿ⁻¹ + … + λ_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFilter {
    /// `[λ_0, .., λ_{n-1}]`, lowest power first.
    lambdas: Vec<f64>,
}

impl LambdaFilter {
    /// `lambdas` are listed lowest power first: `[15, 45]` is `s² + 45s + 15`.
    pub fn new(lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let filter = Self {
            lambdas: lambdas.to_vec(),
        };
        if !linalg::is_hurwitz(&filter.polynomial()) {
            return Err(Error::NotHurwitz);
        }
        Ok(filter)
    }

    pub fn order(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `Λ(s)` coefficients, highest power first.
    pub fn polynomial(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.lambdas.iter().rev().copied()).collect()
    }

    /// Companion-form Euler step `z ← z + dt·(A_Λ z + e_n·input)`, in place.
    pub fn step(&self, z: &mut DVector<f64>, input: f64, dt: f64) {
        let n = self.order();
        let top = input - self.lambdas.iter().zip(z.iter()).map(|(l, zi)| l * zi).sum::<f64>();
        for i in 0..n - 1 {
            z[i] += dt * z[i + 1];
        }
        z[n - 1] += dt * top;
    }

    /// Tap `sⁱ/Λ(s)` read from the bank state. The tap `i = n` exists only
    /// through the direct input and is formed as `input − Σ λ_j z_j`.
    pub fn tap(&self, z: &DVector<f64>, i: usize, input: f64) -> f64 {
        if i < self.order() {
            z[i]
        } else {
            input - self.lambdas.iter().zip(z.iter()).map(|(l, zi)| l * zi).sum::<f64>()
        }
    }
}

/// Filter-bank state for the input and output sides plus the current regressor.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorState {
    pub xu: DVector<f64>,
    pub xy: DVector<f64>,
    pub omega: DVector<f64>,
    m: usize,
    last_u: f64,
}

impl RegressorState {
    /// Zero initial conditions for a filter of order `n` and numerator degree `m`.
    pub fn new(filter: &LambdaFilter, m: usize) -> Result<Self> {
        let n = filter.order();
        if m > n {
            return Err(Error::DegreeMismatch { num: m, den: n });
        }
        Ok(Self {
            xu: DVector::zeros(n),
            xy: DVector::zeros(n),
            omega: DVector::zeros(n + m + 1),
            m,
            last_u: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    /// Advances both banks one Euler step with `(u, y)` held over `dt` and
    /// refreshes `omega`.
    pub fn step(&mut self, filter: &LambdaFilter, u: f64, y: f64, dt: f64) {
        filter.step(&mut self.xu, u, dt);
        filter.step(&mut self.xy, y, dt);
        self.last_u = u;
        self.refresh(filter);
    }

    fn refresh(&mut self, filter: &LambdaFilter) {
        let n = filter.order();
        let m = self.m;
        for (k, i) in (0..=m).rev().enumerate() {
            self.omega[k] = filter.tap(&self.xu, i, self.last_u);
        }
        for (k, i) in (0..n).rev().enumerate() {
            self.omega[m + 1 + k] = -self.xy[i];
        }
    }
}

/// Functional form of [`RegressorState::step`].
pub fn regressor_step(
    state: &RegressorState,
    filter: &LambdaFilter,
    u: f64,
    y: f64,
    dt: f64,
) -> RegressorState {
    let mut next = state.clone();
    next.step(filter, u, y, dt);
    next
}

/// The ideal parameter vector of the regression.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueTheta(pub DVector<f64>);

impl TrueTheta {
    /// `num = [b_m..b_0]`, `den = [1, a_{n-1}..a_0]`, `lambdas = [λ_0..λ_{n-1}]`.
    pub fn new(num: &[f64], den: &[f64], lambdas: &[f64]) -> Result<Self> {
        if num.is_empty() || den.len() < 2 {
            return Err(Error::EmptyPolynomial);
        }
        let n = den.len() - 1;
        if lambdas.len() != n {
            return Err(Error::OrderMismatch {
                plant: n,
                filter: lambdas.len(),
            });
        }
        if num.len() - 1 > n {
            return Err(Error::DegreeMismatch {
                num: num.len() - 1,
                den: n,
            });
        }
        let theta: Vec<f64> = num
            .iter()
            .copied()
            .chain((0..n).rev().map(|i| den[n - i] - lambdas[i]))
            .collect();
        Ok(Self(DVector::from_vec(theta)))
    }

    pub fn for_plant(plant: &PlantModel, filter: &LambdaFilter) -> Result<Self> {
        Self::new(plant.num(), plant.den(), filter.lambdas())
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Alias of [`TrueTheta::new`].
pub fn true_theta(num: &[f64], den: &[f64], lambdas: &[f64]) -> Result<TrueTheta> {
    TrueTheta::new(num, den, lambdas)
}

/// Alias of [`LambdaFilter::new`].
pub fn make_lambda_filter(lambdas: &[f64]) -> Result<LambdaFilter> {
    LambdaFilter::new(lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn filter_construction() {
        let f = LambdaFilter::new(&[15.0, 45.0]).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.polynomial(), vec![1.0, 45.0, 15.0]);
        assert_eq!(LambdaFilter::new(&[1.0]).unwrap().polynomial(), vec![1.0, 1.0]);
        assert_eq!(LambdaFilter::new(&[-1.0]), Err(Error::NotHurwitz));
        assert_eq!(LambdaFilter::new(&[]), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn theta_examples() {
        let th = true_theta(&[4.0, 1.0], &[1.0, 1.0, 4.0], &[15.0, 45.0]).unwrap();
        assert_eq!(th.0.as_slice(), &[4.0, 1.0, -44.0, -11.0]);
        let th = true_theta(&[1.0], &[1.0, 1.0], &[1.0]).unwrap();
        assert_eq!(th.0.as_slice(), &[1.0, 0.0]);
        let th = true_theta(&[0.0], &[1.0, 45.0, 15.0], &[15.0, 45.0]).unwrap();
        assert!(th.0.iter().all(|&v| v == 0.0));
        assert_eq!(
            true_theta(&[1.0], &[1.0, 1.0, 4.0], &[1.0]),
            Err(Error::OrderMismatch { plant: 2, filter: 1 })
        );
    }

    #[test]
    fn zero_signals_keep_zero_regressor() {
        let f = LambdaFilter::new(&[15.0, 45.0]).unwrap();
        let mut s = RegressorState::new(&f, 1).unwrap();
        for _ in 0..1000 {
            s.step(&f, 0.0, 0.0, 1e-3);
        }
        assert!(s.omega.iter().all(|&v| v == 0.0));
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn constant_inputs_reach_dc_taps() {
        let f = LambdaFilter::new(&[15.0, 45.0]).unwrap();
        let mut s = RegressorState::new(&f, 1).unwrap();
        for _ in 0..80_000 {
            s.step(&f, 100.0, 25.0, 1e-3);
        }
        let expect = [0.0, 100.0 / 15.0, 0.0, -25.0 / 15.0];
        for (a, b) in s.omega.iter().zip(expect) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn functional_step_leaves_input_untouched() {
        let f = LambdaFilter::new(&[1.0]).unwrap();
        let s0 = RegressorState::new(&f, 0).unwrap();
        let s1 = regressor_step(&s0, &f, 1.0, 0.5, 0.1);
        assert_eq!(s0.omega.as_slice(), &[0.0, 0.0]);
        assert_relative_eq!(s1.xu[0], 0.1);
        assert_relative_eq!(s1.omega[1], -0.05);
    }
}
