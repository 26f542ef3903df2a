//! Small dense linear-algebra helpers. Symmetric eigenvalues use cyclic
//! Jacobi.

use nalgebra::{DMatrix, DVector};

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// Only the upper triangle is read. Off-diagonal entries are annihilated until
/// every `|a_pq| <= 1e-12 * sqrt(|a_pp a_qq|)`, which keeps small eigenvalues
/// of positive semidefinite matrices accurate relative to their own size.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            a[i * n + j] = m[(i, j)];
            a[j * n + i] = m[(i, j)];
        }
    }

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let scale = (app.abs() * aqq.abs()).sqrt();
                if apq.abs() <= JACOBI_TOL * scale || apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

pub fn lambda_min(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn lambda_max(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m).last().copied().unwrap_or(0.0)
}

/// `(M + Mᵀ) / 2` in place.
pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Symmetry up to `tol` relative to the largest entry.
pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let n = m.nrows();
    (0..n).all(|i| ((i + 1)..n).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= tol * scale))
}

/// Positive definiteness by attempted Cholesky factorization.
pub fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|v| v.is_finite()) && m.clone().cholesky().is_some()
}

/// Solves `M z = b` for symmetric positive definite `M`.
pub fn spd_solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    m.clone().cholesky().map(|c| c.solve(b))
}

/// Number of singular values above `rel_tol * σ_max`.
pub fn numerical_rank(w: &DMatrix<f64>, rel_tol: f64) -> usize {
    if w.is_empty() {
        return 0;
    }
    let sv = w.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Frobenius norm, `sqrt(tr(MᵀM))`.
pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// Routh–Hurwitz test for a real polynomial given highest power first.
///
/// Returns `true` iff every root has strictly negative real part.
pub fn is_hurwitz(coeffs: &[f64]) -> bool {
    let c: Vec<f64> = match coeffs.iter().position(|&v| v != 0.0) {
        Some(i) => coeffs[i..].to_vec(),
        None => return false,
    };
    let sign = c[0].signum();
    let c: Vec<f64> = c.iter().map(|v| v * sign).collect();
    if c.iter().any(|&v| !(v > 0.0)) {
        return false;
    }
    let degree = c.len() - 1;
    if degree <= 2 {
        return true;
    }

    let width = degree / 2 + 1;
    let mut prev: Vec<f64> = (0..width).map(|j| c.get(2 * j).copied().unwrap_or(0.0)).collect();
    let mut cur: Vec<f64> = (0..width).map(|j| c.get(2 * j + 1).copied().unwrap_or(0.0)).collect();
    for _ in 1..degree {
        if !(cur[0] > 0.0) {
            return false;
        }
        let next: Vec<f64> = (0..width)
            .map(|j| {
                let a = prev.get(j + 1).copied().unwrap_or(0.0);
                let b = cur.get(j + 1).copied().unwrap_or(0.0);
                (cur[0] * a - prev[0] * b) / cur[0]
            })
            .collect();
        prev = cur;
        cur = next;
    }
    cur[0] > 0.0
}
