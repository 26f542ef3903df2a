//! Plant simulation: controllable-canonical realization of a SISO transfer
//! function, explicit Euler stepping, test inputs and measurement noise.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;

/// State-space realization `ẋ = Ax + Bu`, `y = Cᵀx + d·u + w` of `Z(s)/R(s)`.
///
/// `d` is nonzero only for biproper plants (`m = n`). The transfer-function
/// coefficients are kept alongside the matrices because the regression
/// parametrization is expressed in them.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantModel {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    d: f64,
    x0: DVector<f64>,
    num: Vec<f64>,
    den: Vec<f64>,
}

/// One recorded simulation step.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStep {
    pub t: f64,
    pub x: DVector<f64>,
    /// Measured output, disturbance included.
    pub y: f64,
    pub u: f64,
}

impl PlantModel {
    /// Builds the controllable canonical realization of `num(s)/den(s)`.
    ///
    /// Coefficients are listed highest power first: `num = [b_m, .., b_0]`,
    /// `den = [1, a_{n-1}, .., a_0]`. The initial state is zero.
    pub fn from_tf(num: &[f64], den: &[f64]) -> Result<Self> {
        if num.is_empty() || den.len() < 2 {
            return Err(Error::EmptyPolynomial);
        }
        if den[0] != 1.0 {
            return Err(Error::NonMonicDenominator(den[0]));
        }
        let n = den.len() - 1;
        let m = num.len() - 1;
        if m > n {
            return Err(Error::DegreeMismatch { num: m, den: n });
        }
        if !linalg::is_hurwitz(den) {
            return Err(Error::NotHurwitz);
        }

        // a_i and b_i indexed by power of s
        let a_coef = |i: usize| den[n - i];
        let b_coef = |i: usize| if i <= m { num[m - i] } else { 0.0 };

        let mut a = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i + 1)] = 1.0;
        }
        for j in 0..n {
            a[(n - 1, j)] = -a_coef(j);
        }
        let mut b = DVector::zeros(n);
        b[n - 1] = 1.0;
        let d = b_coef(n);
        let c = DVector::from_fn(n, |i, _| b_coef(i) - d * a_coef(i));

        Ok(Self {
            a,
            b,
            c,
            d,
            x0: DVector::zeros(n),
            num: num.to_vec(),
            den: den.to_vec(),
        })
    }

    /// Replaces the initial state.
    pub fn with_x0(mut self, x0: &[f64]) -> Result<Self> {
        if x0.len() != self.order() {
            return Err(Error::InitialStateMismatch {
                expected: self.order(),
                got: x0.len(),
            });
        }
        self.x0 = DVector::from_column_slice(x0);
        Ok(self)
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    /// Direct feedthrough, zero unless the plant is biproper.
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn x0(&self) -> &DVector<f64> {
        &self.x0
    }

    /// Numerator coefficients `[b_m, .., b_0]`.
    pub fn num(&self) -> &[f64] {
        &self.num
    }

    /// Denominator coefficients `[1, a_{n-1}, .., a_0]`.
    pub fn den(&self) -> &[f64] {
        &self.den
    }

    /// State dimension `n`.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Numerator degree `m`.
    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    /// Static gain `b_0 / a_0`.
    pub fn dc_gain(&self) -> f64 {
        self.num[self.num.len() - 1] / self.den[self.den.len() - 1]
    }

    /// Noise-free output `Cᵀx + d·u`.
    pub fn output(&self, x: &DVector<f64>, u: f64) -> f64 {
        self.c.dot(x) + self.d * u
    }

    /// One explicit Euler step, `x + dt·(Ax + Bu)`.
    pub fn euler_step(&self, x: &DVector<f64>, u: f64, dt: f64) -> DVector<f64> {
        debug_assert!(dt > 0.0);
        let mut dx = &self.a * x;
        dx.axpy(u, &self.b, 1.0);
        x + dx * dt
    }

    /// Simulates from `x0` over `steps` Euler steps with input `u(t)` and
    /// additive output disturbance `w(k)`. Returns the `steps + 1` samples
    /// including `t = 0`.
    pub fn simulate(
        &self,
        dt: f64,
        steps: usize,
        mut u: impl FnMut(f64) -> f64,
        mut w: impl FnMut(usize) -> f64,
    ) -> Vec<SimStep> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut x = self.x0.clone();
        for k in 0..=steps {
            let t = k as f64 * dt;
            let uk = u(t);
            let y = self.output(&x, uk) + w(k);
            let next = if k < steps { Some(self.euler_step(&x, uk, dt)) } else { None };
            out.push(SimStep { t, x, y, u: uk });
            match next {
                Some(nx) => x = nx,
                None => break,
            }
        }
        out
    }
}

/// Zero-order-hold Gaussian measurement noise.
///
/// A stream with power `P` and sample time `Ts` holds i.i.d. zero-mean normal
/// samples of variance `P / Ts` for `Ts` seconds each. Sample `k` is drawn
/// from its own ChaCha8 stream keyed by `(seed, k)`, so any sample can be
/// regenerated without replaying the ones before it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub power: f64,
    pub seed: u64,
    pub sample_time: f64,
}

impl NoiseSpec {
    pub fn new(power: f64, seed: u64, sample_time: f64) -> Result<Self> {
        if !(power >= 0.0) {
            return Err(Error::NonPositiveInput("noise power"));
        }
        if !(sample_time > 0.0) {
            return Err(Error::NonPositiveInput("noise sample time"));
        }
        Ok(Self {
            power,
            seed,
            sample_time,
        })
    }

    pub fn std_dev(&self) -> f64 {
        (self.power / self.sample_time).sqrt()
    }

    /// The `k`-th held sample.
    pub fn sample(&self, k: u64) -> f64 {
        if self.power == 0.0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k);
        let z: f64 = StandardNormal.sample(&mut rng);
        z * self.std_dev()
    }

    /// Index of the sample held at time `t`.
    pub fn hold_index(&self, t: f64) -> u64 {
        // the small offset keeps t = k·Ts from landing on k-1 after rounding
        ((t / self.sample_time) + 1e-9).floor().max(0.0) as u64
    }

    /// Noise value at time `t`.
    pub fn at(&self, t: f64) -> f64 {
        self.sample(self.hold_index(t))
    }
}

/// Sum of sines `Σ A_k sin(φ_k t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multisine {
    amplitudes: Vec<f64>,
    frequencies: Vec<f64>,
}

impl Multisine {
    /// Empty lists are accepted and give the zero signal.
    pub fn new(amplitudes: &[f64], frequencies: &[f64]) -> Result<Self> {
        if amplitudes.len() != frequencies.len() {
            return Err(Error::LengthMismatch {
                amplitudes: amplitudes.len(),
                frequencies: frequencies.len(),
            });
        }
        if let Some(i) = amplitudes.iter().position(|&a| a == 0.0) {
            return Err(Error::ZeroAmplitude(i));
        }
        for (i, f) in frequencies.iter().enumerate() {
            if frequencies[..i].contains(f) {
                return Err(Error::DuplicateFrequency(*f));
            }
        }
        Ok(Self {
            amplitudes: amplitudes.to_vec(),
            frequencies: frequencies.to_vec(),
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn value(&self, t: f64) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.frequencies)
            .map(|(a, f)| a * (f * t).sin())
            .sum()
    }
}

/// Convenience wrapper around [`Multisine`].
pub fn multisine(amplitudes: &[f64], frequencies: &[f64], t: f64) -> Result<f64> {
    Ok(Multisine::new(amplitudes, frequencies)?.value(t))
}
