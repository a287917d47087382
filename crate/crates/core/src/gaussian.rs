//! Exact phase-space representation of `S3|α⟩`.
//!
//! Under `S3⁻¹ Q S3 = ΛQ` and `S3⁻¹ P S3 = ΓP` a coherent state with
//! quadrature means `σ = √2 Re α`, `χ = √2 Im α` and covariance `I/2` maps to
//! a pure Gaussian with mean `(Λσ, Γχ)` and covariance `diag(ΛΛᵀ/2, ΓΓᵀ/2)`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};
use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::symplectic::{build_squeeze_matrices, double_factorial, SqueezeMatrices};

/// Largest supported moment order; `15!! σ^16` is still comfortably finite.
pub const MAX_MOMENT_ORDER: u32 = 16;

const PATH_AGREEMENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitudes(pub [Complex64; 3]);

impl CoherentAmplitudes {
    pub fn new(alpha: [Complex64; 3]) -> Result<Self> {
        for (j, a) in alpha.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::invalid(format!("alpha{} must be finite", j + 1)));
            }
        }
        Ok(CoherentAmplitudes(alpha))
    }

    pub fn vacuum() -> Self {
        CoherentAmplitudes([Complex64::new(0.0, 0.0); 3])
    }

    pub fn real(alpha: [f64; 3]) -> Result<Self> {
        Self::new(alpha.map(|a| Complex64::new(a, 0.0)))
    }

    /// Amplitude of the collective mode `(a1 + a2 + a3)/√3`.
    pub fn collective(&self) -> Complex64 {
        self.0.iter().sum::<Complex64>() / 3f64.sqrt()
    }

    /// `σ_j = √2 Re α_j`.
    pub fn q_means(&self) -> Vector3<f64> {
        Vector3::from_fn(|j, _| 2f64.sqrt() * self.0[j].re)
    }

    /// `χ_j = √2 Im α_j`.
    pub fn p_means(&self) -> Vector3<f64> {
        Vector3::from_fn(|j, _| 2f64.sqrt() * self.0[j].im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub lambda: f64,
    pub alpha: CoherentAmplitudes,
    pub matrices: SqueezeMatrices,
    /// `(q̄1, q̄2, q̄3, p̄1, p̄2, p̄3)`
    pub mean: Vector6<f64>,
    pub cov: Matrix6<f64>,
    precision: Matrix6<f64>,
}

pub fn make_state(lambda: f64, alpha: CoherentAmplitudes) -> Result<GaussianState> {
    let matrices = build_squeeze_matrices(lambda)?;
    let alpha = CoherentAmplitudes::new(alpha.0)?;
    let lam = matrices.q_transform;
    let gam = matrices.p_transform;

    let qbar = lam * alpha.q_means();
    let pbar = gam * alpha.p_means();
    let mut mean = Vector6::zeros();
    mean.fixed_rows_mut::<3>(0).copy_from(&qbar);
    mean.fixed_rows_mut::<3>(3).copy_from(&pbar);

    let mut cov = Matrix6::zeros();
    cov.fixed_view_mut::<3, 3>(0, 0).copy_from(&(lam * lam.transpose() * 0.5));
    cov.fixed_view_mut::<3, 3>(3, 3).copy_from(&(gam * gam.transpose() * 0.5));

    let precision = cov
        .try_inverse()
        .ok_or_else(|| Error::Numeric(format!("covariance singular at lambda = {lambda}")))?;

    Ok(GaussianState { lambda, alpha, matrices, mean, cov, precision })
}

impl GaussianState {
    /// Inverse covariance, computed numerically from `cov`.
    pub fn precision(&self) -> &Matrix6<f64> {
        &self.precision
    }

    pub fn variance_of(&self, coeffs: &Vector6<f64>) -> f64 {
        (coeffs.transpose() * self.cov * coeffs)[(0, 0)]
    }
}

/// A scalar observable `c · (Q1, Q2, Q3, P1, P2, P3)` and an even moment order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    pub coeffs: Vector6<f64>,
    pub order: u32,
}

impl MomentQuery {
    pub fn new(coeffs: Vector6<f64>, order: u32) -> Result<Self> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::invalid(format!("moment order must be even and >= 2, got {order}")));
        }
        if order > MAX_MOMENT_ORDER {
            return Err(Error::invalid(format!(
                "moment order {order} exceeds the supported maximum {MAX_MOMENT_ORDER}"
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("moment coefficients must be finite"));
        }
        Ok(MomentQuery { coeffs, order })
    }

    /// `X3 = (Q1 + Q2 + Q3)/√6`
    pub fn x3(order: u32) -> Result<Self> {
        let c = 1.0 / 6f64.sqrt();
        Self::new(Vector6::new(c, c, c, 0.0, 0.0, 0.0), order)
    }

    /// `Y3 = (P1 + P2 + P3)/√6`
    pub fn y3(order: u32) -> Result<Self> {
        let c = 1.0 / 6f64.sqrt();
        Self::new(Vector6::new(0.0, 0.0, 0.0, c, c, c), order)
    }

    fn half_order(&self) -> u32 {
        self.order / 2
    }
}

/// `⟨(ΔF)^{2m}⟩ = (2m−1)!! σ^{2m}` with `σ² = cᵀ·cov·c` (Isserlis).
pub fn central_moment(state: &GaussianState, query: &MomentQuery) -> f64 {
    let m = query.half_order();
    let sigma2 = state.variance_of(&query.coeffs);
    let df = double_factorial(2 * m as i64 - 1).expect("order validated by MomentQuery") as f64;
    let out = df * sigma2.powi(m as i32);
    debug_assert!({
        let alt = central_moment_normal_ordered(state, query);
        (alt - out).abs() <= PATH_AGREEMENT * out.abs().max(f64::MIN_POSITIVE)
    });
    out
}

/// The same moment through the normal-ordering expansion
/// `(ΔF)^{2m} = Σ_k (2m)!/((2m−2k)! k!) (Σ ηκ / 2)^k :(ΔF)^{2m−2k}:`
/// with `S3⁻¹ F S3 = Σ (η_j a_j + κ_j a_j†)` evaluated on the coherent state.
pub fn central_moment_normal_ordered(state: &GaussianState, query: &MomentQuery) -> f64 {
    let m = query.half_order() as usize;
    let cq = Vector3::new(query.coeffs[0], query.coeffs[1], query.coeffs[2]);
    let cp = Vector3::new(query.coeffs[3], query.coeffs[4], query.coeffs[5]);
    // Λ and Γ are symmetric, so c·ΛQ = (Λc)·Q.
    let xq = state.matrices.q_transform * cq;
    let xp = state.matrices.p_transform * cp;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::i();
    let eta: Vec<Complex64> = (0..3).map(|j| xq[j] * s2 - i * xp[j] * s2).collect();
    let kappa: Vec<Complex64> = (0..3).map(|j| xq[j] * s2 + i * xp[j] * s2).collect();

    let contraction: Complex64 = eta.iter().zip(&kappa).map(|(e, k)| e * k).sum();
    // Normal-ordered moments in |α⟩ reduce to powers of (F(α) − ⟨F⟩).
    let f_alpha: Complex64 = (0..3)
        .map(|j| eta[j] * state.alpha.0[j] + kappa[j] * state.alpha.0[j].conj())
        .sum();
    let shift = f_alpha - query.coeffs.dot(&state.mean);

    let fact = |n: usize| -> f64 { (1..=n).map(|x| x as f64).product() };
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let coef = fact(2 * m) / (fact(2 * m - 2 * k) * fact(k));
        total += (contraction / 2.0).powu(k as u32) * shift.powu((2 * m - 2 * k) as u32) * coef;
    }
    total.re
}

fn odd_double_factorial_f64(m: u32) -> f64 {
    (1..=m).map(|j| (2 * j - 1) as f64).product()
}

/// Closed-form `2m`-th moment of `X3`: `(1/4)^m (2m−1)!! e^{−4mλ}`.
pub fn hos_x(lambda: f64, m: u32) -> f64 {
    0.25f64.powi(m as i32) * odd_double_factorial_f64(m) * (-4.0 * m as f64 * lambda).exp()
}

/// Closed-form `2m`-th moment of `Y3`: `(1/4)^m (2m−1)!! e^{4mλ}`.
pub fn hos_y(lambda: f64, m: u32) -> f64 {
    0.25f64.powi(m as i32) * odd_double_factorial_f64(m) * (4.0 * m as f64 * lambda).exp()
}

/// Variances of `(Q1+Q2)/2` and its conjugate in the two-mode squeezed
/// vacuum: `(e^{−2λ}/4, e^{2λ}/4)`.
pub fn two_mode_baseline_variance(lambda: f64) -> (f64, f64) {
    ((-2.0 * lambda).exp() / 4.0, (2.0 * lambda).exp() / 4.0)
}

/// Closed-form Wigner function
/// `W = π⁻³ exp[−|Γq − σ|² − |Λp − χ|²]`,
/// written out with the circulant entries `u1, v1, u2, v2`.
pub fn wigner(state: &GaussianState, q: [f64; 3], p: [f64; 3]) -> f64 {
    let s = &state.matrices;
    let sigma = state.alpha.q_means();
    let chi = state.alpha.p_means();

    // Γ² and Λ² are circulant: diagonal u²+2v², off-diagonal 2uv+v².
    let gg_d = s.u2 * s.u2 + 2.0 * s.v2 * s.v2;
    let gg_o = 2.0 * s.u2 * s.v2 + s.v2 * s.v2;
    let ll_d = s.u1 * s.u1 + 2.0 * s.v1 * s.v1;
    let ll_o = 2.0 * s.u1 * s.v1 + s.v1 * s.v1;

    let mut exponent = 0.0;
    for j in 0..3 {
        exponent -= gg_d * q[j] * q[j] - 2.0 * s.u2 * q[j] * sigma[j] + sigma[j] * sigma[j];
        exponent -= ll_d * p[j] * p[j] - 2.0 * s.u1 * p[j] * chi[j] + chi[j] * chi[j];
        for k in 0..j {
            exponent -= 2.0 * gg_o * q[j] * q[k];
            exponent += 2.0 * s.v2 * (q[j] * sigma[k] + q[k] * sigma[j]);
            exponent -= 2.0 * ll_o * p[j] * p[k];
            exponent += 2.0 * s.v1 * (p[j] * chi[k] + p[k] * chi[j]);
        }
    }
    exponent.exp() / PI.powi(3)
}

/// Generic pure-Gaussian Wigner function from mean and covariance:
/// `W = exp(−½ dᵀ cov⁻¹ d) / ((2π)³ √det cov)`.
pub fn wigner_from_covariance(state: &GaussianState, q: [f64; 3], p: [f64; 3]) -> f64 {
    let r = Vector6::new(q[0], q[1], q[2], p[0], p[1], p[2]);
    let d = r - state.mean;
    let quad = (d.transpose() * state.precision * d)[(0, 0)];
    let norm = (2.0 * PI).powi(3) * state.cov.determinant().sqrt();
    (-0.5 * quad).exp() / norm
}

/// Coefficients of the normally ordered form
/// `S3 = c · exp[½ a†ᵀ T a†] :exp[a†ᵀ (ΛN⁻¹ − I) a]: exp[½ aᵀ (N⁻¹ − I) a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedForm {
    /// `c = (det Λ / det N)^{1/2}`, equal to `⟨000|S3|000⟩`.
    pub prefactor: f64,
    /// `T = ΛN⁻¹Λᵀ − I`
    pub pair_creation: Matrix3<f64>,
    /// `ΛN⁻¹ − I`
    pub number_mixing: Matrix3<f64>,
    /// `N⁻¹ − I`
    pub pair_annihilation: Matrix3<f64>,
}

pub fn normal_order_coefficients(lambda: f64) -> Result<NormalOrderedForm> {
    ensure_finite("lambda", lambda)?;
    let s = build_squeeze_matrices(lambda)?;
    let lam = s.q_transform;
    let n_inv = s
        .n_matrix
        .try_inverse()
        .ok_or_else(|| Error::Numeric(format!("N not invertible at lambda = {lambda}")))?;
    let ratio = lam.determinant() / s.n_matrix.determinant();
    if !(ratio > 0.0) {
        return Err(Error::Numeric(format!("det Λ / det N = {ratio} is not positive")));
    }
    let id = Matrix3::identity();
    let pair_creation = lam * n_inv * lam.transpose() - id;
    Ok(NormalOrderedForm {
        prefactor: ratio.sqrt(),
        pair_creation: (pair_creation + pair_creation.transpose()) * 0.5,
        number_mixing: lam * n_inv - id,
        pair_annihilation: n_inv - id,
    })
}
