//! Printed formulas that disagree with the implemented ones, each with
//! numbers at a few reference points.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;
use squeeze3::fock::{build_arena, coherent_ket, expect, s3_unitary, FockOperator};
use squeeze3::gaussian::{make_state, CoherentAmplitudes, MomentQuery};
use squeeze3::photon::{gm_pair, printed, second_factorial_paper_closed};
use squeeze3::symplectic::build_squeeze_matrices;
use squeeze3::Result;

/// Evidence rows with every discrepancy at or below this are not errata.
pub const NEGLIGIBLE: f64 = 1e-12;

/// Cutoff used for the Fock-space reference values.
const ORACLE_CUTOFF: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub point: String,
    pub quantity: String,
    pub printed: f64,
    pub implemented: f64,
    /// Independent value (Fock-space oracle or exact integral), if any.
    pub reference: Option<f64>,
    /// `|printed − implemented|`
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Erratum {
    pub id: String,
    pub topic: String,
    pub printed_formula: String,
    pub implemented_formula: String,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataReport {
    pub errata: Vec<Erratum>,
}

fn evidence(point: String, quantity: &str, printed: f64, implemented: f64, reference: Option<f64>) -> Evidence {
    Evidence {
        point,
        quantity: quantity.to_string(),
        printed,
        implemented,
        reference,
        discrepancy: (printed - implemented).abs(),
    }
}

fn fmt_alpha(a: &CoherentAmplitudes) -> String {
    let parts: Vec<String> = a.0.iter().map(|z| format!("{}", z.re)).collect();
    format!("({})", parts.join(", "))
}

/// `∫ exp(−xᵀMx + 2bᵀx − c) d³x = π^{3/2} det(M)^{−1/2} exp(bᵀM⁻¹b − c)`
fn gaussian_integral(m: &Matrix3<f64>, b: &Vector3<f64>, c: f64) -> f64 {
    let inv = m.try_inverse().expect("positive-definite quadratic form");
    std::f64::consts::PI.powf(1.5) / m.determinant().sqrt() * (b.dot(&(inv * b)) - c).exp()
}

/// `u = e^{−2λ} + e^{2λ}`, `v = e^{−2λ} − e^{2λ}`
fn uv(lambda: f64) -> (f64, f64) {
    ((-2.0 * lambda).exp() + (2.0 * lambda).exp(), (-2.0 * lambda).exp() - (2.0 * lambda).exp())
}

fn reference_alpha() -> CoherentAmplitudes {
    CoherentAmplitudes::real([0.4, 0.5, 0.6]).expect("finite")
}

/// Second line of the Wigner evaluation with `q` where `p` belongs: the
/// momentum exponent no longer depends on `p`, so the phase-space integral
/// grows like the volume of the `p` box.
fn e1() -> Result<Erratum> {
    let alpha = reference_alpha();
    let lambda = 0.2;
    let s = build_squeeze_matrices(lambda)?;
    let (lam, gam) = (s.q_transform, s.p_transform);
    let (sigma, chi) = (alpha.q_means(), alpha.p_means());
    let pi3 = std::f64::consts::PI.powi(3);

    // Printed: exp[−|Λq − σ|² − |Γq − χ|²] integrated over q ∈ R³, p ∈ [−L, L]³.
    let m = lam * lam + gam * gam;
    let b = lam * sigma + gam * chi;
    let q_part = gaussian_integral(&m, &b, sigma.norm_squared() + chi.norm_squared()) / pi3;
    // Implemented: exp[−|Γq − σ|² − |Λp − χ|²] over all of phase space.
    let implemented = gaussian_integral(&(gam * gam), &(gam * sigma), sigma.norm_squared())
        * gaussian_integral(&(lam * lam), &(lam * chi), chi.norm_squared())
        / pi3;

    let evidence = [6.0, 12.0]
        .into_iter()
        .map(|half_width: f64| {
            evidence(
                format!("lambda = {lambda}, alpha = {}, |p_j| <= {half_width}", fmt_alpha(&alpha)),
                "phase-space integral of W",
                q_part * (2.0 * half_width).powi(3),
                implemented,
                Some(1.0),
            )
        })
        .collect();
    Ok(Erratum {
        id: "E1".into(),
        topic: "Wigner function, momentum term of the normally ordered evaluation".into(),
        printed_formula: "exp[-(e^{-λA} q - σ)^2 - (e^{λA} q - χ)^2]".into(),
        implemented_formula: "exp[-(e^{λA} q - σ)^2 - (e^{-λA} p - χ)^2]".into(),
        evidence,
    })
}

/// `G`, `M` written with a second, unsummed index; read literally with that
/// index fixed to 1.
fn e2() -> Result<Erratum> {
    let mut rows = Vec::new();
    for (alpha, lambda) in [([1.0, 0.5, 0.2], 1.0), ([0.3, -0.4, 0.8], 0.5)] {
        let a = CoherentAmplitudes::real(alpha)?;
        let (u, v) = uv(lambda);
        let s = Complex64::new(2.0 * u / (3.0 * v), 0.0).sqrt();
        let t = Complex64::new(2.0 * v / (3.0 * u), 0.0).sqrt();
        let sum: Complex64 = a.0.iter().sum();
        let i = Complex64::i();
        let g = i * (s * a.0[0].conj() * 3.0 - t * sum);
        let m = i * (s * a.0[0] * 3.0 - t * sum.conj());
        let gm = gm_pair(&a, lambda)?;
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}", fmt_alpha(&a)),
            "Re(G M)",
            (g * m).re,
            (gm.g * gm.m).re,
            None,
        ));
    }
    Ok(Erratum {
        id: "E2".into(),
        topic: "collective-mode parameters G and M".into(),
        printed_formula: "G = i Σ_j (√(2u/3v) α_i* − √(2v/3u) α_j), M = i Σ_j (√(2u/3v) α_i − √(2v/3u) α_j*)".into(),
        implemented_formula: "G = i Σ_j (√(2u/3v) α_j* − √(2v/3u) α_j), M = i Σ_j (√(2u/3v) α_j − √(2v/3u) α_j*)".into(),
        evidence: rows,
    })
}

/// `⟨α|S3⁻¹ A S3|α⟩` in the truncated Fock space.
fn oracle_heisenberg_a(alpha: &CoherentAmplitudes, lambda: f64) -> Result<Complex64> {
    let arena = build_arena(ORACLE_CUTOFF)?;
    let u = s3_unitary(&arena, lambda)?;
    let psi = u.apply(&coherent_ket(&arena, alpha)?)?;
    expect(&arena, &psi, &FockOperator::collective_lowering(&arena))
}

fn e3() -> Result<Erratum> {
    let alpha = CoherentAmplitudes::real([0.3, 0.2, 0.1])?;
    let abar = alpha.collective();
    let mut rows = Vec::new();
    for lambda in [0.0, 0.2] {
        let (u, v) = uv(lambda);
        let printed = (abar * v + abar.conj() * u) / 2f64.sqrt();
        let r: f64 = 2.0 * lambda;
        let implemented = abar * r.cosh() - abar.conj() * r.sinh();
        let oracle = oracle_heisenberg_a(&alpha, lambda)?;
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}", fmt_alpha(&alpha)),
            "Re <alpha| S3^-1 A S3 |alpha>",
            printed.re,
            implemented.re,
            Some(oracle.re),
        ));
    }
    Ok(Erratum {
        id: "E3".into(),
        topic: "similarity transform of the collective mode A".into(),
        printed_formula: "S3^-1 A S3 = (v A + u A†)/√2".into(),
        implemented_formula: "S3^-1 A S3 = (u A + v A†)/2 = cosh(2λ) A − sinh(2λ) A†".into(),
        evidence: rows,
    })
}

fn oracle_var_x3(lambda: f64) -> Result<f64> {
    let arena = build_arena(ORACLE_CUTOFF)?;
    let u = s3_unitary(&arena, lambda)?;
    let psi = u.apply(&coherent_ket(&arena, &reference_alpha())?)?;
    squeeze3::fock::moment_x3(&arena, &psi, 2)
}

/// Transforms applied in the wrong direction: `(Λq, Γp)` in place of
/// `(Γq, Λp)`. The printed Gaussian has covariance `diag(Γ², Λ²)/2`, i.e.
/// it describes `S3⁻¹|α⟩`.
fn e4() -> Result<Erratum> {
    let mut rows = Vec::new();
    let x3 = Vector3::repeat(1.0 / 6f64.sqrt());
    for lambda in [0.2, 0.5] {
        let s = build_squeeze_matrices(lambda)?;
        let lam = s.q_transform;
        let precision_q = lam * lam * 2.0;
        let printed = x3.dot(&(precision_q.try_inverse().expect("invertible") * x3));
        let state = make_state(lambda, reference_alpha())?;
        let implemented = state.variance_of(&MomentQuery::x3(2)?.coeffs);
        let reference = if lambda <= 0.3 { Some(oracle_var_x3(lambda)?) } else { None };
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}", fmt_alpha(&reference_alpha())),
            "Var(X3) implied by W",
            printed,
            implemented,
            reference,
        ));
    }
    Ok(Erratum {
        id: "E4".into(),
        topic: "Wigner function, direction of the phase-space transform".into(),
        printed_formula: "W = π^-3 exp[-(e^{-λA} q - σ)^2 - (e^{λA} p - χ)^2]".into(),
        implemented_formula: "W = π^-3 exp[-(e^{λA} q - σ)^2 - (e^{-λA} p - χ)^2]".into(),
        evidence: rows,
    })
}

/// The fully expanded exponent as printed, with `+σ²`, `+χ²` and the cross
/// terms entering with the opposite sign.
fn printed_expanded_pi3_w(lambda: f64, alpha: &CoherentAmplitudes, q: [f64; 3], p: [f64; 3]) -> Result<f64> {
    let s = build_squeeze_matrices(lambda)?;
    let (sigma, chi) = (alpha.q_means(), alpha.p_means());
    let mut e = 0.0;
    for j in 0..3 {
        e -= (s.u1 * s.u1 + 2.0 * s.v1 * s.v1) * q[j] * q[j] - sigma[j] * sigma[j] + 2.0 * s.u1 * q[j] * sigma[j];
        e -= (s.u2 * s.u2 + 2.0 * s.v2 * s.v2) * p[j] * p[j] - chi[j] * chi[j] + 2.0 * s.u2 * p[j] * chi[j];
        for k in 0..j {
            e -= 2.0 * ((2.0 * s.u1 * s.v1 + s.v1 * s.v1) * q[j] * q[k] + 2.0 * s.v1 * q[j] * sigma[k]);
            e -= 2.0 * ((2.0 * s.u2 * s.v2 + s.v2 * s.v2) * p[j] * p[k] + 2.0 * s.v2 * p[j] * chi[k]);
        }
    }
    Ok(e.exp())
}

fn e5() -> Result<Erratum> {
    let mut rows = Vec::new();
    for (lambda, alpha) in [(0.0, [0.4, 0.5, 0.6]), (0.2, [0.4, 0.5, 0.6]), (0.2, [0.0, 0.0, 0.0])] {
        let a = CoherentAmplitudes::real(alpha)?;
        let printed = printed_expanded_pi3_w(lambda, &a, [0.0; 3], [0.0; 3])?;
        let state = make_state(lambda, a)?;
        let implemented = std::f64::consts::PI.powi(3) * squeeze3::gaussian::wigner(&state, [0.0; 3], [0.0; 3]);
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}, q = p = 0", fmt_alpha(&a)),
            "pi^3 W",
            printed,
            implemented,
            None,
        ));
    }
    Ok(Erratum {
        id: "E5".into(),
        topic: "Wigner function, fully expanded exponent".into(),
        printed_formula: "-Σ_j[(u1²+2v1²)q_j² − σ_j² + 2u1 q_j σ_j] − 2Σ_{j>k}[(2u1v1+v1²)q_j q_k + 2v1 q_j σ_k] (and likewise for p, χ)".into(),
        implemented_formula: "-Σ_j[(u2²+2v2²)q_j² + σ_j² − 2u2 q_j σ_j] − 2Σ_{j>k}[(2u2v2+v2²)q_j q_k − v2(q_j σ_k + q_k σ_j)] (and likewise for p, χ with u1, v1)".into(),
        evidence: rows,
    })
}

fn e6() -> Result<Erratum> {
    let mut rows = Vec::new();
    for (alpha, lambda) in [([1.0, 1.0, 1.0], 1.0), ([1.0, 1.0, 0.5], 0.5)] {
        let a = CoherentAmplitudes::real(alpha)?;
        let printed = printed::second_factorial_line2(&a, lambda)?;
        let implemented = second_factorial_paper_closed(&a, lambda)?;
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}", fmt_alpha(&a)),
            "<A†² A²>",
            printed.re,
            implemented,
            None,
        ));
    }
    Ok(Erratum {
        id: "E6".into(),
        topic: "second factorial moment, expanded form".into(),
        printed_formula: "sinh²(−4λ)[2^-5 tanh²(−2λ) + 2 GM tanh(2λ) + (G²−2)(M²−2)]".into(),
        implemented_formula: "sinh²(−4λ)[2^-5 tanh²(−2λ) + (1/2) GM tanh(2λ) + (G²−2)(M²−2)], matching the Hermite sum".into(),
        evidence: rows,
    })
}

fn e7() -> Result<Erratum> {
    let mut rows = Vec::new();
    for (alpha, lambda) in [([1.0, 1.0, 1.0], 1.0), ([1.0, 1.0, 0.3], 1.0)] {
        let a = CoherentAmplitudes::real(alpha)?;
        let printed = printed::gm_product(&a, lambda);
        let gm = gm_pair(&a, lambda)?;
        rows.push(evidence(
            format!("lambda = {lambda}, alpha = {}", fmt_alpha(&a)),
            "Re(G M)",
            printed.re,
            (gm.g * gm.m).re,
            None,
        ));
    }
    Ok(Erratum {
        id: "E7".into(),
        topic: "closed form of the product GM".into(),
        printed_formula: "GM = (2/3) Σ(α_k* α_j* + α_k α_j) − (4/3) coth(−4λ) Σ α_j* α_k".into(),
        implemented_formula: "GM from G and M with principal square roots, i.e. the opposite sign on the (2/3) Σ term for λ > 0".into(),
        evidence: rows,
    })
}

/// All errata with a non-negligible discrepancy at some reference point.
pub fn errata_report() -> Result<ErrataReport> {
    let all = vec![e1()?, e2()?, e3()?, e4()?, e5()?, e6()?, e7()?];
    Ok(ErrataReport { errata: keep_significant(all) })
}

pub fn keep_significant(entries: Vec<Erratum>) -> Vec<Erratum> {
    entries
        .into_iter()
        .filter(|e| e.evidence.iter().any(|r| !(r.discrepancy <= NEGLIGIBLE)))
        .collect()
}
