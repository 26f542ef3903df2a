//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

use mre_id::{ExtendedRegression, LambdaFilter, PlantModel, RegressorState, RlsMre, TrueTheta};

/// Observable canonical realization of a strictly proper `num/den`, built
/// without going through [`PlantModel`].
pub fn observable_form(num: &[f64], den: &[f64]) -> (DMatrix<f64>, DVector<f64>, DVector<f64>) {
    let n = den.len() - 1;
    assert!(num.len() <= n, "strictly proper only");
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, 0)] = -den[i + 1];
        if i + 1 < n {
            a[(i, i + 1)] = 1.0;
        }
    }
    let mut b = DVector::zeros(n);
    for (k, &c) in num.iter().rev().enumerate() {
        b[n - 1 - k] = c;
    }
    let mut c = DVector::zeros(n);
    c[0] = 1.0;
    (a, b, c)
}

/// `y(t)` of the step response to a constant input `u` from rest, via the
/// matrix exponential: `y = Cᵀ A⁻¹ (e^{At} − I) B u`.
pub fn exact_step_output(num: &[f64], den: &[f64], u: f64, t: f64) -> f64 {
    let (a, b, c) = observable_form(num, den);
    let n = a.nrows();
    let phi = (&a * t).exp() - DMatrix::identity(n, n);
    let x = a.lu().solve(&(phi * &b)).expect("A is Hurwitz, hence invertible") * u;
    c.dot(&x)
}

/// Logged trajectory of the identification signals at every Euler step.
pub struct Logged {
    pub dt: f64,
    pub t: Vec<f64>,
    pub omega: Vec<DVector<f64>>,
    pub y: Vec<f64>,
    /// Streaming `(Ω, Υ)` at the end of the log.
    pub ext: ExtendedRegression,
}

/// Simulates plant, filters and extended regression for `steps` steps with
/// constant input and no noise, logging `ω` and `y` before each step.
pub fn log_pipeline(
    num: &[f64],
    den: &[f64],
    lambdas: &[f64],
    u: f64,
    beta: f64,
    dt: f64,
    steps: usize,
) -> Logged {
    let plant = PlantModel::from_tf(num, den).unwrap();
    let filter = LambdaFilter::new(lambdas).unwrap();
    let mut reg = RegressorState::new(&filter, plant.num_degree()).unwrap();
    let dim = reg.dim();
    let mut ext = ExtendedRegression::new(dim, beta).unwrap();
    let mut x = plant.x0().clone();
    let mut log = Logged {
        dt,
        t: Vec::with_capacity(steps + 1),
        omega: Vec::with_capacity(steps + 1),
        y: Vec::with_capacity(steps + 1),
        ext: ExtendedRegression::new(dim, beta).unwrap(),
    };
    for k in 0..=steps {
        let y = plant.output(&x, u);
        log.t.push(k as f64 * dt);
        log.omega.push(reg.omega.clone());
        log.y.push(y);
        if k == steps {
            break;
        }
        ext.step(&reg.omega, y, dt).unwrap();
        reg.step(&filter, u, y, dt);
        x = plant.euler_step(&x, u, dt);
    }
    log.ext = ext;
    log
}

/// Trapezoidal `∫₀ᵗ e^{-βτ} ωωᵀ dτ` and `∫₀ᵗ e^{-βτ} y ω dτ` over a log.
pub fn offline_extension(log: &Logged, beta: f64) -> (DMatrix<f64>, DVector<f64>) {
    let dim = log.omega[0].len();
    let mut omega = DMatrix::zeros(dim, dim);
    let mut upsilon = DVector::zeros(dim);
    for k in 1..log.t.len() {
        let h = log.t[k] - log.t[k - 1];
        for j in [k - 1, k] {
            let w = 0.5 * h * (-beta * log.t[j]).exp();
            let v = &log.omega[j];
            omega += v * v.transpose() * w;
            upsilon += v * (w * log.y[j]);
        }
    }
    (omega, upsilon)
}

/// Scalar least-squares estimate in closed form:
///
/// ```text
/// θ̂(t) = [e^{-λt}/Γ₀ + ∫ e^{-λ(t−τ)} Ω² dτ]⁻¹ · [e^{-λt} θ̂₀/Γ₀ + ∫ e^{-λ(t−τ)} Ω Υ dτ]
/// ```
///
/// with the integrals taken by trapezoid over samples `(t_k, Ω_k, Υ_k)`.
pub fn scalar_closed_form(
    t: &[f64],
    omega: &[f64],
    upsilon: &[f64],
    lambda_f: f64,
    gamma0: f64,
    theta0: f64,
) -> f64 {
    let t_end = *t.last().unwrap();
    let mut g = 0.0;
    let mut q = 0.0;
    for k in 1..t.len() {
        let h = t[k] - t[k - 1];
        for j in [k - 1, k] {
            let w = 0.5 * h * (-lambda_f * (t_end - t[j])).exp();
            g += w * omega[j] * omega[j];
            q += w * omega[j] * upsilon[j];
        }
    }
    let decay = (-lambda_f * t_end).exp();
    (decay * theta0 / gamma0 + q) / (decay / gamma0 + g)
}

/// Runs the scalar estimator loop on `ω(t) = 1 + 0.5 sin 2t`,
/// `y = θω + 0.1 cos 5t` and returns `(θ̂ from the ODE, θ̂ from the closed form)`.
pub fn scalar_rls_vs_closed_form(t_end: f64, dt: f64) -> (f64, f64) {
    let (lambda_f, gamma0, theta0, theta, beta) = (1.0, 1.0, 0.5, 2.0, 1.0);
    let mut ext = ExtendedRegression::new(1, beta).unwrap();
    let mut rls = RlsMre::with_initial(
        DVector::from_element(1, theta0),
        DMatrix::from_element(1, 1, gamma0),
        lambda_f,
    )
    .unwrap();
    let steps = (t_end / dt).round() as usize;
    let (mut ts, mut om, mut up) = (Vec::new(), Vec::new(), Vec::new());
    for k in 0..steps {
        let t = k as f64 * dt;
        ts.push(t);
        om.push(ext.omega[(0, 0)]);
        up.push(ext.upsilon[0]);
        let w = 1.0 + 0.5 * (2.0 * t).sin();
        let y = theta * w + 0.1 * (5.0 * t).cos();
        rls.step(&ext, dt).unwrap();
        ext.step(&DVector::from_element(1, w), y, dt).unwrap();
    }
    ts.push(steps as f64 * dt);
    om.push(ext.omega[(0, 0)]);
    up.push(ext.upsilon[0]);
    (rls.theta_hat[0], scalar_closed_form(&ts, &om, &up, lambda_f, gamma0, theta0))
}

/// Parameters of `(4s + 1)/(s² + s + 4)` under the filter `s² + 45s + 15`.
pub fn reference_theta() -> TrueTheta {
    TrueTheta::new(&[4.0, 1.0], &[1.0, 1.0, 4.0], &[15.0, 45.0]).unwrap()
}
