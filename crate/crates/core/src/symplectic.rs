//! The 3×3 matrix family generated by the all-to-all adjacency matrix, and
//! the scalar special functions shared by the rest of the crate.
//!
//! `S3` acts on the quadratures as `Q → e^{-λA} Q`, `P → e^{λA} P`. Because
//! `A` has eigenvalue 2 on `(1,1,1)` and −1 on its orthogonal complement,
//! both exponentials are circulant-symmetric with closed-form entries.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Tolerance used for matrix identities throughout the crate.
pub const MATRIX_TOL: f64 = 1e-10;

/// Term budget for [`expm_series`] after scaling.
const SERIES_MAX_TERMS: usize = 200;

/// The adjacency matrix of the triangle graph: zero diagonal, ones elsewhere.
pub fn adjacency() -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| if i == j { 0.0 } else { 1.0 })
}

/// Builds the symmetric circulant matrix with diagonal `d` and off-diagonal `o`.
pub fn circulant(d: f64, o: f64) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| if i == j { d } else { o })
}

/// The transformation matrices of `S3` at a given squeezing strength.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeMatrices {
    pub lambda: f64,
    pub adjacency: Matrix3<f64>,
    /// Λ = e^{-λA}; maps `Q` under `S3⁻¹ Q S3`.
    pub q_transform: Matrix3<f64>,
    /// Γ = e^{λA} = Λ⁻¹; maps `P` under `S3⁻¹ P S3`.
    pub p_transform: Matrix3<f64>,
    /// N = (1 + ΛᵀΛ)/2, the Gaussian-integral kernel of the normal-ordered form.
    pub n_matrix: Matrix3<f64>,
    pub u1: f64,
    pub v1: f64,
    pub u2: f64,
    pub v2: f64,
    /// e^{-2λ} + e^{2λ}
    pub u: f64,
    /// e^{-2λ} − e^{2λ}
    pub v: f64,
}

pub fn build_squeeze_matrices(lambda: f64) -> Result<SqueezeMatrices> {
    ensure_finite("lambda", lambda)?;
    let em2 = (-2.0 * lambda).exp();
    let ep2 = (2.0 * lambda).exp();
    let ep1 = lambda.exp();
    let em1 = (-lambda).exp();

    let u1 = (em2 + 2.0 * ep1) / 3.0;
    let v1 = (em2 - ep1) / 3.0;
    let u2 = (ep2 + 2.0 * em1) / 3.0;
    let v2 = (ep2 - em1) / 3.0;

    let q_transform = circulant(u1, v1);
    let p_transform = circulant(u2, v2);
    let n_matrix = (Matrix3::identity() + q_transform.transpose() * q_transform) * 0.5;

    let out = SqueezeMatrices {
        lambda,
        adjacency: adjacency(),
        q_transform,
        p_transform,
        n_matrix,
        u1,
        v1,
        u2,
        v2,
        u: em2 + ep2,
        v: em2 - ep2,
    };
    if out.q_transform.iter().chain(out.p_transform.iter()).all(|x| x.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Numeric(format!("lambda = {lambda} overflows the transformation matrices")))
    }
}

fn max_abs(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// e^M by a truncated Taylor series with scaling and squaring.
///
/// Used to validate the closed forms; the series stops once a term's
/// max-abs norm drops below `tol`.
pub fn expm_series(m: &Matrix3<f64>, tol: f64) -> Result<Matrix3<f64>> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("series tolerance must be positive, got {tol}")));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("matrix entries must be finite"));
    }
    let norm = m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / 2f64.powi(squarings as i32);

    let mut sum = Matrix3::identity();
    let mut term = Matrix3::identity();
    let mut converged = false;
    for k in 1..=SERIES_MAX_TERMS {
        term = term * scaled / k as f64;
        sum += term;
        if max_abs(&term) < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Taylor series did not reach tolerance {tol} within {SERIES_MAX_TERMS} terms"
        )));
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    Ok(sum)
}

/// Physicists' Hermite polynomial `H_m(x)` via `H_{m+1} = 2x H_m − 2m H_{m−1}`.
pub fn hermite(m: u32, x: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if m == 0 {
        return prev;
    }
    let mut cur = x * 2.0;
    for n in 1..m {
        let next = x * cur * 2.0 - prev * (2.0 * n as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// `n!!` for odd `n ≥ −1`, with `(−1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<u64> {
    if n < -1 || n % 2 == 0 {
        return Err(Error::invalid(format!(
            "double factorial is defined here for odd n >= -1, got {n}"
        )));
    }
    let mut acc: u64 = 1;
    let mut k = n;
    while k > 1 {
        acc = acc
            .checked_mul(k as u64)
            .ok_or_else(|| Error::Numeric(format!("{n}!! overflows u64")))?;
        k -= 2;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const GRID: [f64; 5] = [-1.0, -0.3, 0.0, 0.3, 1.0];

    #[test]
    fn lambda_zero_is_identity() {
        let s = build_squeeze_matrices(0.0).unwrap();
        assert_abs_diff_eq!(s.q_transform, Matrix3::identity(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.p_transform, Matrix3::identity(), epsilon = 1e-15);
        assert_eq!((s.u1, s.v1, s.u, s.v), (1.0, 0.0, 2.0, 0.0));
    }

    #[test]
    fn ln2_closed_form_entries() {
        // e^{-2λ} = 1/4, e^{λ} = 2
        let s = build_squeeze_matrices(2f64.ln()).unwrap();
        assert_abs_diff_eq!(s.u1, 17.0 / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.v1, -7.0 / 12.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_finite_lambda() {
        assert!(matches!(build_squeeze_matrices(f64::NAN), Err(Error::InvalidParameter(_))));
        assert!(build_squeeze_matrices(f64::INFINITY).is_err());
    }

    #[test]
    fn inverse_pair_symmetry_and_row_sums() {
        for &l in &GRID {
            let s = build_squeeze_matrices(l).unwrap();
            let prod = s.q_transform * s.p_transform;
            assert_abs_diff_eq!(prod, Matrix3::identity(), epsilon = 1e-12);
            assert_abs_diff_eq!(s.q_transform, s.q_transform.transpose(), epsilon = 0.0);
            let d = s.q_transform[(0, 0)];
            let o = s.q_transform[(0, 1)];
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { d } else { o };
                    assert_eq!(s.q_transform[(i, j)], want);
                }
            }
            assert_abs_diff_eq!(s.u1 + 2.0 * s.v1, (-2.0 * l).exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(s.u2 + 2.0 * s.v2, (2.0 * l).exp(), epsilon = 1e-12);
            let chol = nalgebra::Cholesky::new(s.n_matrix);
            assert!(chol.is_some(), "N not positive definite at lambda={l}");
        }
    }

    #[test]
    fn eigen_directions() {
        let ones = nalgebra::Vector3::new(1.0, 1.0, 1.0);
        let w1 = nalgebra::Vector3::new(1.0, -1.0, 0.0);
        let w2 = nalgebra::Vector3::new(0.5, 0.7, -1.2);
        for &l in &GRID {
            let s = build_squeeze_matrices(l).unwrap();
            assert_abs_diff_eq!(s.q_transform * ones, ones * (-2.0 * l).exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(s.q_transform * w1, w1 * l.exp(), epsilon = 1e-12);
            assert_abs_diff_eq!(s.q_transform * w2, w2 * l.exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn entry_sum_of_lambda_squared() {
        for &l in &GRID {
            let s = build_squeeze_matrices(l).unwrap();
            let sq = s.q_transform * s.q_transform;
            assert_abs_diff_eq!(sq.sum(), 3.0 * (-4.0 * l).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn series_matches_closed_forms() {
        assert_abs_diff_eq!(
            expm_series(&Matrix3::zeros(), 1e-16).unwrap(),
            Matrix3::identity(),
            epsilon = 0.0
        );
        for l in [0.1, 0.5, 1.0] {
            let s = build_squeeze_matrices(l).unwrap();
            let lam = expm_series(&(-l * adjacency()), 1e-17).unwrap();
            let gam = expm_series(&(l * adjacency()), 1e-17).unwrap();
            assert_abs_diff_eq!(lam, s.q_transform, epsilon = 1e-12);
            assert_abs_diff_eq!(gam, s.p_transform, epsilon = 1e-12);
            assert_abs_diff_eq!(lam * gam, Matrix3::identity(), epsilon = 1e-10);
        }
    }

    #[test]
    fn series_rejects_bad_tolerance() {
        assert!(expm_series(&Matrix3::zeros(), 0.0).is_err());
        assert!(expm_series(&Matrix3::zeros(), -1.0).is_err());
    }

    #[test]
    fn hermite_low_orders() {
        let x = Complex64::new(0.7, -0.2);
        assert_eq!(hermite(0, x), Complex64::new(1.0, 0.0));
        assert_eq!(hermite(1, x), x * 2.0);
        let h2 = x * x * 4.0 - 2.0;
        assert!((hermite(2, x) - h2).norm() < 1e-14);
        assert_eq!(hermite(2, Complex64::new(0.0, 0.0)), Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn hermite_derivative_identity() {
        // dH3/dx at 1 by central differences
        let h = 1e-5;
        let f = |x: f64| hermite(3, Complex64::new(x, 0.0)).re;
        let d = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        let want = 2.0 * 3.0 * hermite(2, Complex64::new(1.0, 0.0)).re;
        assert_abs_diff_eq!(want, 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d, want, epsilon = 1e-6);
    }

    /// m-th t-derivative of exp(2xt − t²) at t = 0, by the Cauchy integral on
    /// a circle (trapezoid rule), independent of the recurrence.
    fn mother_function_derivative(m: u32, x: Complex64) -> Complex64 {
        let n = 64;
        let r = 0.5;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let t = Complex64::from_polar(r, theta);
            let f = (x * t * 2.0 - t * t).exp();
            acc += f * Complex64::from_polar(1.0, -(m as f64) * theta);
        }
        let factorial: f64 = (1..=m).map(|i| i as f64).product();
        acc / n as f64 / r.powi(m as i32) * factorial
    }

    #[test]
    fn hermite_matches_mother_function() {
        for x in [Complex64::new(0.3, 0.0), Complex64::new(-1.2, 0.4), Complex64::new(0.0, 2.0)] {
            for m in 0..=6 {
                let want = mother_function_derivative(m, x);
                let got = hermite(m, x);
                assert!((got - want).norm() < 1e-6 * (1.0 + want.norm()), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), 1);
        assert_eq!(double_factorial(1).unwrap(), 1);
        assert_eq!(double_factorial(3).unwrap(), 3);
        let direct: u64 = [1u64, 3, 5, 7].iter().product();
        assert_eq!(double_factorial(7).unwrap(), direct);
        assert_eq!(double_factorial(15).unwrap(), 2_027_025);
        assert!(double_factorial(4).is_err());
        assert!(double_factorial(-3).is_err());
    }
}
