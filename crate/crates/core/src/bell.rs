//! The three-mode displaced-parity Bell combination
//! `B(3) = E(β1,β2,β3′) + E(β1,β2′,β3) + E(β1′,β2,β3) − E(β1′,β2′,β3′)`
//! with correlations `E(β) = π³ W(β)`, where a displacement `β` is read as
//! the phase-space point `q = √2 Re β`, `p = √2 Im β`.
//!
//! Local realistic models obey `|B(3)| ≤ 2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};
use crate::fock::{build_arena, coherent_ket, displaced_parity, s3_unitary};
use crate::gaussian::{make_state, wigner, CoherentAmplitudes, GaussianState};
use crate::grid::Grid;

/// Coherent amplitudes used for the fixed-pattern scans.
pub const FIG2_ALPHA: [f64; 3] = [0.4, 0.5, 0.6];

/// Largest `|λ|` accepted by [`b3_oracle_check`].
pub const ORACLE_MAX_LAMBDA: f64 = 0.3;

/// Width of the final golden-section bracket.
const GOLDEN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSetting {
    pub beta: [Complex64; 3],
    pub beta_prime: [Complex64; 3],
}

impl BellSetting {
    pub fn new(beta: [Complex64; 3], beta_prime: [Complex64; 3]) -> Result<Self> {
        for (name, set) in [("beta", &beta), ("beta_prime", &beta_prime)] {
            for (j, b) in set.iter().enumerate() {
                if !b.is_finite() {
                    return Err(Error::invalid(format!("{name}{} must be finite", j + 1)));
                }
            }
        }
        Ok(BellSetting { beta, beta_prime })
    }

    pub fn zero() -> Self {
        BellSetting { beta: [ZERO; 3], beta_prime: [ZERO; 3] }
    }

    /// The four displacement triples, in the order they enter `B(3)`; the
    /// last one carries the minus sign.
    pub fn triples(&self) -> [[Complex64; 3]; 4] {
        let (b, p) = (self.beta, self.beta_prime);
        [[b[0], b[1], p[2]], [b[0], p[1], b[2]], [p[0], b[1], b[2]], [p[0], p[1], p[2]]]
    }

    /// Relabels modes 1 and 2.
    pub fn swap12(&self) -> Self {
        let mut s = *self;
        s.beta.swap(0, 1);
        s.beta_prime.swap(0, 1);
        s
    }
}

/// The one-parameter pattern `β = (0, 0, −b)`, `β′ = (b, b, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Config {
    pub b: f64,
}

impl Fig2Config {
    pub fn new(b: f64) -> Result<Self> {
        ensure_finite("b", b)?;
        if b <= 0.0 {
            return Err(Error::invalid(format!("b must be positive, got {b}")));
        }
        Ok(Fig2Config { b })
    }

    pub fn alpha() -> CoherentAmplitudes {
        CoherentAmplitudes::real(FIG2_ALPHA).expect("constant amplitudes are finite")
    }

    pub fn setting(&self) -> BellSetting {
        pattern(self.b)
    }
}

fn pattern(b: f64) -> BellSetting {
    let b = Complex64::new(b, 0.0);
    BellSetting { beta: [ZERO, ZERO, -b], beta_prime: [b, b, ZERO] }
}

/// `π³ W` at the phase-space point of the displacements `betas`.
pub fn correlation(state: &GaussianState, betas: [Complex64; 3]) -> f64 {
    let r2 = 2f64.sqrt();
    let q = betas.map(|b| r2 * b.re);
    let p = betas.map(|b| r2 * b.im);
    PI.powi(3) * wigner(state, q, p)
}

pub fn b3(state: &GaussianState, setting: &BellSetting) -> f64 {
    let [t1, t2, t3, t4] = setting.triples();
    correlation(state, t1) + correlation(state, t2) + correlation(state, t3) - correlation(state, t4)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub lambda: f64,
    pub b_star: f64,
    pub b3_max: f64,
}

/// Maximises `B(3)` over `b` for each `λ`, with `α` and the displacement
/// pattern of [`Fig2Config`] held fixed.
///
/// The grid maximum (first occurrence, so ties go to the smaller `b`) is
/// refined by golden-section search between its grid neighbours.
pub fn fig2_scan(lambda: &Grid, b: &Grid) -> Result<Vec<Fig2Row>> {
    if b.start <= 0.0 {
        return Err(Error::invalid(format!("b grid must be positive, starts at {}", b.start)));
    }
    let bs = b.points();
    let alpha = Fig2Config::alpha();
    lambda
        .points()
        .into_iter()
        .map(|lam| {
            let state = make_state(lam, alpha)?;
            let f = |x: f64| b3(&state, &pattern(x));
            let (b_star, b3_max) = maximise_on_grid(&f, &bs);
            Ok(Fig2Row { lambda: lam, b_star, b3_max })
        })
        .collect()
}

/// `B(3)` along the pattern for every `b` on the grid.
pub fn fig2_profile(lambda: f64, b: &Grid) -> Result<Vec<(f64, f64)>> {
    let state = make_state(lambda, Fig2Config::alpha())?;
    Ok(b.points().into_iter().map(|x| (x, b3(&state, &pattern(x)))).collect())
}

fn maximise_on_grid(f: &impl Fn(f64) -> f64, xs: &[f64]) -> (f64, f64) {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    if xs.len() < 2 {
        return (xs[best], best_val);
    }
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    let (x, v) = golden_section_max(f, lo, hi, GOLDEN_TOL);
    if v > best_val {
        (x, v)
    } else {
        (xs[best], best_val)
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        // `>=` keeps the left point on ties.
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub analytic: f64,
    pub oracle: f64,
}

impl OracleCheck {
    pub fn abs_diff(&self) -> f64 {
        (self.analytic - self.oracle).abs()
    }
}

/// `B(3)` from the Wigner function and from displaced-parity expectations in
/// the truncated Fock space.
pub fn b3_oracle_check(
    lambda: f64,
    alpha: &CoherentAmplitudes,
    setting: &BellSetting,
    cutoff: usize,
) -> Result<OracleCheck> {
    ensure_finite("lambda", lambda)?;
    if lambda.abs() > ORACLE_MAX_LAMBDA {
        return Err(Error::invalid(format!(
            "|lambda| = {} is outside the Fock-oracle range {ORACLE_MAX_LAMBDA}",
            lambda.abs()
        )));
    }
    let setting = BellSetting::new(setting.beta, setting.beta_prime)?;
    let analytic = b3(&make_state(lambda, *alpha)?, &setting);

    let arena = build_arena(cutoff)?;
    let u = s3_unitary(&arena, lambda)?;
    let psi = u.apply(&coherent_ket(&arena, alpha)?)?;
    let [t1, t2, t3, t4] = setting.triples();
    let oracle = displaced_parity(&arena, &psi, t1)?
        + displaced_parity(&arena, &psi, t2)?
        + displaced_parity(&arena, &psi, t3)?
        - displaced_parity(&arena, &psi, t4)?;
    Ok(OracleCheck { analytic, oracle })
}

/// Options for [`global_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub max_evaluations: usize,
    /// Initial simplex edge along every coordinate.
    pub initial_step: f64,
    /// `λ` is clamped into `[0, lambda_max]`.
    pub lambda_max: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_evaluations: 4000, initial_step: 0.1, lambda_max: 5.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub lambda: f64,
    pub setting: BellSetting,
    pub b3: f64,
    pub evaluations: usize,
}

/// Heuristic local search over `λ` and all twelve displacement components
/// with `α` fixed to [`FIG2_ALPHA`], started from the fixed pattern at
/// `(lambda, b)`. Nelder–Mead gives no guarantee of a global maximum.
pub fn global_search(lambda: f64, b: f64, options: SearchOptions) -> Result<SearchResult> {
    ensure_finite("lambda", lambda)?;
    let seed_setting = Fig2Config::new(b)?.setting();
    if !(options.lambda_max >= 0.0) || options.max_evaluations == 0 || !(options.initial_step > 0.0) {
        return Err(Error::invalid("search options must have positive step, budget and lambda range"));
    }
    let alpha = Fig2Config::alpha();
    let decode = |x: &[f64]| -> (f64, BellSetting) {
        let c = |i: usize| Complex64::new(x[i], x[i + 1]);
        let s = BellSetting {
            beta: [c(1), c(3), c(5)],
            beta_prime: [c(7), c(9), c(11)],
        };
        (x[0].clamp(0.0, options.lambda_max), s)
    };
    let objective = |x: &[f64]| -> f64 {
        let (lam, s) = decode(x);
        match make_state(lam, alpha) {
            Ok(st) => -b3(&st, &s),
            Err(_) => f64::INFINITY,
        }
    };
    let mut x0 = vec![lambda.clamp(0.0, options.lambda_max)];
    for z in seed_setting.beta.iter().chain(&seed_setting.beta_prime) {
        x0.push(z.re);
        x0.push(z.im);
    }
    let (x, fx, evaluations) =
        nelder_mead::minimise(&objective, &x0, options.initial_step, options.max_evaluations, 1e-13);
    let (lam, setting) = decode(&x);
    Ok(SearchResult { lambda: lam, setting, b3: -fx, evaluations })
}

mod nelder_mead {
    /// Minimises `f` from `x0` with the standard reflection, expansion,
    /// contraction and shrink coefficients `(1, 2, ½, ½)`. Stops when the
    /// spread of simplex values falls below `ftol` or the budget is spent.
    /// Returns `(x, f(x), evaluations)`.
    pub fn minimise(
        f: &impl Fn(&[f64]) -> f64,
        x0: &[f64],
        step: f64,
        max_evals: usize,
        ftol: f64,
    ) -> (Vec<f64>, f64, usize) {
        let n = x0.len();
        let evals = std::cell::Cell::new(0usize);
        let eval = |x: &[f64]| {
            evals.set(evals.get() + 1);
            f(x)
        };
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            let v = eval(&x);
            simplex.push((x, v));
        }
        let along = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
        };
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if evals.get() >= max_evals || spread.abs() <= ftol {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let reflected = along(&centroid, &worst.0, -1.0);
            let fr = eval(&reflected);
            if fr < simplex[0].1 {
                let expanded = along(&centroid, &worst.0, -2.0);
                let fe = eval(&expanded);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
            } else {
                let (towards, ft) = if fr < worst.1 { (&reflected, fr) } else { (&worst.0, worst.1) };
                let contracted = along(&centroid, towards, 0.5);
                let fc = eval(&contracted);
                if fc < ft {
                    simplex[n] = (contracted, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for item in simplex.iter_mut().skip(1) {
                        let x = along(&best, &item.0, 0.5);
                        let v = eval(&x);
                        *item = (x, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, v) = simplex.swap_remove(0);
        (x, v, evals.get())
    }
}
