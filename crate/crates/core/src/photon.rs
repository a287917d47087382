//! Higher-order sub-Poissonian statistics of the collective mode
//! `A = (a1 + a2 + a3)/√3`.
//!
//! Two evaluators are provided for `⟨A†ᵏAᵏ⟩`:
//!
//! * the *paper* path, the Hermite-polynomial closed form in terms of
//!   the pair `(G, M)`, evaluated as written (principal-branch square roots);
//! * the *exact* path. `A` only sees the `(1,1,1)` eigendirection, so
//!   `S3⁻¹ A S3 = cosh(2λ) A − sinh(2λ) A†` and the expectation reduces to a
//!   single-mode squeezed coherent state with amplitude `ᾱ = Σα_j/√3`.
//!
//! The two paths do not agree; both are reported so they can be compared.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::gaussian::CoherentAmplitudes;
use crate::grid::Grid;
use crate::symplectic::hermite;

pub const MAX_POWER: u32 = 6;

/// Imaginary parts below this (relative to `max(1, |re|)`) are rounding noise.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Parameters of the Fig. 1 scan: `α1 = α2 = λ = 1`.
pub const FIG1_LAMBDA: f64 = 1.0;
pub const FIG1_ALPHA12: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMode {
    pub collective_alpha: Complex64,
    /// `r = 2λ`
    pub effective_squeeze: f64,
}

impl CollectiveMode {
    pub fn new(alpha: &CoherentAmplitudes, lambda: f64) -> Result<Self> {
        ensure_finite("lambda", lambda)?;
        Ok(CollectiveMode {
            collective_alpha: alpha.collective(),
            effective_squeeze: 2.0 * lambda,
        })
    }

    /// Coherent amplitude of `S3⁻¹ A S3` evaluated on `|ᾱ⟩`:
    /// `cosh(r) ᾱ − sinh(r) ᾱ*`.
    pub fn displaced_amplitude(&self) -> Complex64 {
        let r = self.effective_squeeze;
        self.collective_alpha * r.cosh() - self.collective_alpha.conj() * r.sinh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmPair {
    pub g: Complex64,
    pub m: Complex64,
}

fn check_power(k: u32) -> Result<()> {
    if (1..=MAX_POWER).contains(&k) {
        Ok(())
    } else {
        Err(Error::invalid(format!("power k must be in 1..={MAX_POWER}, got {k}")))
    }
}

fn uv(lambda: f64) -> (f64, f64) {
    let a = (-2.0 * lambda).exp();
    let b = (2.0 * lambda).exp();
    (a + b, a - b)
}

fn real_part_checked(z: Complex64) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Numeric(format!("non-finite value {z}")));
    }
    if z.im.abs() > IMAG_RESIDUE_TOL * z.re.abs().max(1.0) {
        return Err(Error::FormulaInconsistency { real: z.re, residue: z.im });
    }
    Ok(z.re)
}

/// `G = i Σ_j (√(2u/3v) α_j* − √(2v/3u) α_j)`,
/// `M = i Σ_j (√(2u/3v) α_j − √(2v/3u) α_j*)`.
pub fn gm_pair(alpha: &CoherentAmplitudes, lambda: f64) -> Result<GmPair> {
    ensure_finite("lambda", lambda)?;
    if lambda == 0.0 {
        return Err(Error::SingularParameter(
            "u/v ratios diverge at lambda = 0; use the exact path".into(),
        ));
    }
    let (u, v) = uv(lambda);
    let s = Complex64::new(2.0 * u / (3.0 * v), 0.0).sqrt();
    let t = Complex64::new(2.0 * v / (3.0 * u), 0.0).sqrt();
    let sum: Complex64 = alpha.0.iter().sum();
    let i = Complex64::i();
    Ok(GmPair {
        g: i * (s * sum.conj() - t * sum),
        m: i * (s * sum - t * sum.conj()),
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// The printed Hermite closed form
/// `⟨A†ᵏAᵏ⟩ = (−uv)ᵏ/2ᵏ Σ_n (−2v)ⁿ (k!)² / (2⁴ⁿ uⁿ ((k−n)!)² n!) H_{k−n}(G/2) H_{k−n}(M/2)`.
pub fn mean_power_paper(k: u32, alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    check_power(k)?;
    let gm = gm_pair(alpha, lambda)?;
    let (u, v) = uv(lambda);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..=k {
        let coef = (-2.0 * v).powi(n as i32) * factorial(k).powi(2)
            / (16f64.powi(n as i32) * u.powi(n as i32) * factorial(k - n).powi(2) * factorial(n));
        sum += hermite(k - n, gm.g / 2.0) * hermite(k - n, gm.m / 2.0) * coef;
    }
    real_part_checked(sum * (-u * v / 2.0).powi(k as i32))
}

/// `k = 1` specialisation: `[GM − tanh(−2λ)/8] sinh(4λ)`.
pub fn mean_photon_paper_closed(alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    let gm = gm_pair(alpha, lambda)?;
    let val = (gm.g * gm.m - (-2.0 * lambda).tanh() / 8.0) * (4.0 * lambda).sinh();
    real_part_checked(val)
}

/// `k = 2` specialisation:
/// `(uv)²/4 [v²/(2⁵u²) − v/(2u) H1(G/2)H1(M/2) + H2(G/2)H2(M/2)]`.
pub fn second_factorial_paper_closed(alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    let gm = gm_pair(alpha, lambda)?;
    let (u, v) = uv(lambda);
    let h1 = gm.g * gm.m;
    let h2 = (gm.g * gm.g - 2.0) * (gm.m * gm.m - 2.0);
    let val = (h1 * (-v / (2.0 * u)) + h2 + v * v / (32.0 * u * u)) * ((u * v).powi(2) / 4.0);
    real_part_checked(val)
}

/// Printed closed forms for `GM`, `G²` and `M²` in terms of the amplitude
/// sums, and the printed second line of the `k = 2` result. Kept verbatim for
/// the errata report; they are not used by either evaluator.
pub mod printed {
    use super::*;

    fn sums(alpha: &CoherentAmplitudes) -> (Complex64, Complex64, Complex64) {
        let s: Complex64 = alpha.0.iter().sum();
        // Σ_jk α_k* α_j, Σ_jk α_j α_k, Σ_jk α_j* α_k*
        (s.conj() * s, s * s, s.conj() * s.conj())
    }

    /// `GM = (2/3) Σ (α_k*α_j* + α_kα_j) − (4/3) coth(−4λ) Σ α_j*α_k`
    pub fn gm_product(alpha: &CoherentAmplitudes, lambda: f64) -> Complex64 {
        let (n, aa, cc) = sums(alpha);
        (cc + aa) * (2.0 / 3.0) - n * (4.0 / 3.0) / (-4.0 * lambda).tanh()
    }

    /// `G² = (4/3) Σ α_k*α_j − (2/3) Σ [α_jα_k tanh(−2λ) + α_j*α_k* coth(−2λ)]`
    pub fn g_squared(alpha: &CoherentAmplitudes, lambda: f64) -> Complex64 {
        let (n, aa, cc) = sums(alpha);
        let th = (-2.0 * lambda).tanh();
        n * (4.0 / 3.0) - (aa * th + cc / th) * (2.0 / 3.0)
    }

    /// `M² = (4/3) Σ α_k*α_j − (2/3) Σ [α_jα_k coth(−2λ) + α_j*α_k* tanh(−2λ)]`
    pub fn m_squared(alpha: &CoherentAmplitudes, lambda: f64) -> Complex64 {
        let (n, aa, cc) = sums(alpha);
        let th = (-2.0 * lambda).tanh();
        n * (4.0 / 3.0) - (aa / th + cc * th) * (2.0 / 3.0)
    }

    /// `sinh²(−4λ) [2⁻⁵ tanh²(−2λ) + 2 GM tanh(2λ) + (G²−2)(M²−2)]`
    /// with `G`, `M` taken from [`gm_pair`].
    pub fn second_factorial_line2(alpha: &CoherentAmplitudes, lambda: f64) -> Result<Complex64> {
        let gm = gm_pair(alpha, lambda)?;
        let th = (-2.0 * lambda).tanh();
        let inner = gm.g * gm.m * (2.0 * (2.0 * lambda).tanh())
            + (gm.g * gm.g - 2.0) * (gm.m * gm.m - 2.0)
            + th * th / 32.0;
        Ok(inner * (-4.0 * lambda).sinh().powi(2))
    }
}

/// Exact `⟨A†ᵏAᵏ⟩` by Wick expansion of `(cA − sA†)†ᵏ (cA − sA†)ᵏ` on `|ᾱ⟩`.
///
/// Writing `A = ᾱ + a₀`, the operator `b = β₀ + b₀` with `β₀ = cᾱ − sᾱ*`;
/// the vacuum contractions are `⟨b₀†b₀†⟩ = ⟨b₀b₀⟩ = −cs` and `⟨b₀†b₀⟩ = s²`.
pub fn mean_power_exact(k: u32, alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    check_power(k)?;
    let mode = CollectiveMode::new(alpha, lambda)?;
    let r = mode.effective_squeeze;
    let (c, s) = (r.cosh(), r.sinh());
    let beta = mode.displaced_amplitude();
    let same_side = -c * s;
    let cross = s * s;

    // ways to pick `p` internal pairs and `r` cross-paired slots out of k
    let ways = |p: u32, r: u32| -> f64 {
        factorial(k) / (factorial(p) * 2f64.powi(p as i32) * factorial(r) * factorial(k - 2 * p - r))
    };

    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..=k / 2 {
        for q in 0..=k / 2 {
            let max_r = (k - 2 * p).min(k - 2 * q);
            for r in 0..=max_r {
                let w = ways(p, r) * ways(q, r) * factorial(r);
                let contraction = same_side.powi((p + q) as i32) * cross.powi(r as i32);
                total += beta.conj().powu(k - 2 * p - r) * beta.powu(k - 2 * q - r) * (w * contraction);
            }
        }
    }
    real_part_checked(total)
}

/// Same quantity computed in a single-mode truncated Fock space: build the
/// coherent vector `|ᾱ⟩`, apply `b = cA − sA†` k times, take the squared norm.
/// The truncation is doubled until two successive results agree.
pub fn mean_power_exact_fock(k: u32, alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    check_power(k)?;
    let mode = CollectiveMode::new(alpha, lambda)?;
    let r = mode.effective_squeeze;
    let (c, s) = (r.cosh(), r.sinh());
    let a0 = mode.collective_alpha;

    let run = |levels: usize| -> f64 {
        let mut v = vec![Complex64::new(0.0, 0.0); levels];
        v[0] = Complex64::new((-a0.norm_sqr() / 2.0).exp(), 0.0);
        for n in 1..levels {
            v[n] = v[n - 1] * a0 / (n as f64).sqrt();
        }
        for _ in 0..k {
            // the raising part extends the support by one level
            let mut out = vec![Complex64::new(0.0, 0.0); v.len() + 1];
            for (n, amp) in v.iter().enumerate() {
                if n > 0 {
                    out[n - 1] += amp * (c * (n as f64).sqrt());
                }
                out[n + 1] -= amp * (s * ((n + 1) as f64).sqrt());
            }
            v = out;
        }
        v.iter().map(|z| z.norm_sqr()).sum()
    };

    let mut levels = 32 + (4.0 * a0.norm_sqr()).ceil() as usize;
    let mut prev = run(levels);
    while levels < 1 << 14 {
        levels *= 2;
        let cur = run(levels);
        if (cur - prev).abs() <= 1e-13 * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Truncation(format!(
        "single-mode Fock evaluation of <A^+{k} A^{k}> did not converge (alpha_bar = {a0}, lambda = {lambda})"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkPath {
    Paper,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PkResult {
    pub k: u32,
    pub path: PkPath,
    /// Value on the requested path.
    pub value: f64,
    /// Paper-path value, when that path is defined at these parameters.
    pub paper_value: Option<f64>,
    pub exact_value: Option<f64>,
    /// `|paper − exact|` when both are available.
    pub discrepancy: Option<f64>,
}

fn pk_on(path: PkPath, k: u32, alpha: &CoherentAmplitudes, lambda: f64) -> Result<f64> {
    let power = |k| match path {
        PkPath::Paper => mean_power_paper(k, alpha, lambda),
        PkPath::Exact => mean_power_exact(k, alpha, lambda),
    };
    let mean = power(1)?;
    if !(mean > 0.0) {
        return Err(Error::DivisionDomain(format!(
            "mean photon number {mean:e} is not positive on the {path:?} path"
        )));
    }
    Ok(power(k)? / mean.powi(k as i32) - 1.0)
}

/// `P_k = ⟨A†ᵏAᵏ⟩ / ⟨A†A⟩ᵏ − 1`. The requested path must succeed; the other
/// is evaluated alongside when it is defined.
pub fn pk(k: u32, alpha: &CoherentAmplitudes, lambda: f64, path: PkPath) -> Result<PkResult> {
    if k < 2 {
        return Err(Error::invalid(format!("P_k needs k >= 2, got {k}")));
    }
    check_power(k)?;
    let value = pk_on(path, k, alpha, lambda)?;
    let (paper_value, exact_value) = match path {
        PkPath::Paper => (Some(value), pk_on(PkPath::Exact, k, alpha, lambda).ok()),
        PkPath::Exact => (pk_on(PkPath::Paper, k, alpha, lambda).ok(), Some(value)),
    };
    let discrepancy = match (paper_value, exact_value) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    };
    Ok(PkResult { k, path, value, paper_value, exact_value, discrepancy })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub re_alpha3: f64,
    pub im_alpha3: f64,
    pub p2_paper: f64,
    pub p2_exact: f64,
}

/// `P2` over a grid of `α3` with `α1 = α2 = λ = 1`, on both paths.
/// Rows are ordered with `Re α3` outermost.
pub fn fig1_scan(re: &Grid, im: &Grid) -> Result<Vec<Fig1Row>> {
    let im_pts = im.points();
    let mut rows = Vec::with_capacity(re.len() * im_pts.len());
    for x in re.points() {
        for &y in &im_pts {
            let alpha = CoherentAmplitudes::new([
                Complex64::new(FIG1_ALPHA12, 0.0),
                Complex64::new(FIG1_ALPHA12, 0.0),
                Complex64::new(x, y),
            ])?;
            let p2_paper = pk_on(PkPath::Paper, 2, &alpha, FIG1_LAMBDA)?;
            let p2_exact = pk_on(PkPath::Exact, 2, &alpha, FIG1_LAMBDA)?;
            if !(p2_paper.is_finite() && p2_exact.is_finite()) {
                return Err(Error::Numeric(format!("non-finite P2 at alpha3 = {x}+{y}i")));
            }
            rows.push(Fig1Row { re_alpha3: x, im_alpha3: y, p2_paper, p2_exact });
        }
    }
    Ok(rows)
}
