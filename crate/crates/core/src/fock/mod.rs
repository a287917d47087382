//! Brute-force truncated three-mode Fock space.
//!
//! States live in `C^{c³}` with `c` levels per mode, indexed in Kronecker
//! order mode1 ⊗ mode2 ⊗ mode3: `index = (n1·c + n2)·c + n3`. Operators are
//! never stored as dense `c³ × c³` matrices; every operator is a sum of
//! products of single-mode matrices applied fibre by fibre.

mod measure;
mod unitary;

pub use measure::{
    central_moment, convergence_report, displaced_parity, expect, mean_power, moment_x3,
    ConvergenceReport, ConvergenceRow,
};
pub use unitary::{s3_unitary, S3Unitary, UNITARITY_TOL};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::CoherentAmplitudes;

pub const MIN_CUTOFF: usize = 2;
pub const MAX_CUTOFF: usize = 32;

/// Largest dimension for which [`FockOperator::to_dense`] will allocate.
pub const MAX_DENSE_DIM: usize = 1000;

pub const MODES: usize = 3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A sparse single-mode matrix, stored as `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrix {
    levels: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl ModeMatrix {
    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "mode matrices are square");
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v != ZERO {
                    entries.push((r, c, v));
                }
            }
        }
        ModeMatrix { levels: m.nrows(), entries }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.levels, self.levels);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        ModeMatrix {
            levels: self.levels,
            entries: self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())).collect(),
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

fn lowering_dense(levels: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(levels, levels, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// The truncated space plus the cached single-mode operators.
#[derive(Debug, Clone)]
pub struct FockArena {
    cutoff: usize,
    dim: usize,
    lowering: ModeMatrix,
    raising: ModeMatrix,
    position: ModeMatrix,
    momentum: ModeMatrix,
    number: ModeMatrix,
    parity: ModeMatrix,
}

pub fn build_arena(cutoff: usize) -> Result<FockArena> {
    if !(MIN_CUTOFF..=MAX_CUTOFF).contains(&cutoff) {
        return Err(Error::invalid(format!(
            "cutoff must be in {MIN_CUTOFF}..={MAX_CUTOFF}, got {cutoff}"
        )));
    }
    let a = lowering_dense(cutoff);
    let ad = a.adjoint();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &ad) * Complex64::new(s2, 0.0);
    // P = (a − a†)/(i√2)
    let p = (&a - &ad) * Complex64::new(0.0, -s2);
    let n = &ad * &a;
    let parity = DMatrix::from_fn(cutoff, cutoff, |r, c| {
        if r == c {
            Complex64::new(if r % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            ZERO
        }
    });
    Ok(FockArena {
        cutoff,
        dim: cutoff.pow(3),
        lowering: ModeMatrix::from_dense(&a),
        raising: ModeMatrix::from_dense(&ad),
        position: ModeMatrix::from_dense(&q),
        momentum: ModeMatrix::from_dense(&p),
        number: ModeMatrix::from_dense(&n),
        parity: ModeMatrix::from_dense(&parity),
    })
}

impl FockArena {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, n: [usize; 3]) -> usize {
        (n[0] * self.cutoff + n[1]) * self.cutoff + n[2]
    }

    pub fn occupations(&self, index: usize) -> [usize; 3] {
        let c = self.cutoff;
        [index / (c * c), (index / c) % c, index % c]
    }

    pub fn lowering(&self) -> &ModeMatrix {
        &self.lowering
    }

    pub fn raising(&self) -> &ModeMatrix {
        &self.raising
    }

    pub fn position(&self) -> &ModeMatrix {
        &self.position
    }

    pub fn momentum(&self) -> &ModeMatrix {
        &self.momentum
    }

    pub fn number(&self) -> &ModeMatrix {
        &self.number
    }

    pub fn parity(&self) -> &ModeMatrix {
        &self.parity
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < MODES {
            Ok(())
        } else {
            Err(Error::invalid(format!("mode index {mode} out of range 0..3")))
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "vector of length {len} does not belong to an arena of dimension {}",
                self.dim
            )))
        }
    }

    /// `(1 ⊗ … ⊗ m ⊗ … ⊗ 1) v` with `m` acting on `mode`.
    pub fn apply_mode(&self, m: &ModeMatrix, mode: usize, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        self.apply_mode_into(m, mode, v, &mut out);
        out
    }

    pub(crate) fn apply_mode_into(
        &self,
        m: &ModeMatrix,
        mode: usize,
        v: &[Complex64],
        out: &mut [Complex64],
    ) {
        self.apply_mode_block(m, mode, 1, v, out);
    }

    /// Like [`FockArena::apply_mode_into`] but on `width` vectors stored
    /// interleaved, element `(index, k)` at `index * width + k`.
    pub(crate) fn apply_mode_block(
        &self,
        m: &ModeMatrix,
        mode: usize,
        width: usize,
        v: &[Complex64],
        out: &mut [Complex64],
    ) {
        debug_assert_eq!(m.levels, self.cutoff);
        debug_assert_eq!(v.len(), self.dim * width);
        let c = self.cutoff;
        let stride = c.pow((MODES - 1 - mode) as u32) * width;
        let block = c * stride;
        let blocks = v.len() / block;
        out.iter_mut().for_each(|z| *z = ZERO);
        for b in 0..blocks {
            let base0 = b * block;
            for &(r, col, val) in &m.entries {
                let src = &v[base0 + col * stride..base0 + col * stride + stride];
                let dst = &mut out[base0 + r * stride..base0 + r * stride + stride];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += val * s;
                }
            }
        }
    }

    /// Single-mode displacement `exp(β a† − β* a)` on the truncated mode.
    pub fn displacement(&self, beta: Complex64) -> Result<ModeMatrix> {
        let a = self.lowering.to_dense();
        let ad = self.raising.to_dense();
        let gen = ad * beta - a * beta.conj();
        Ok(ModeMatrix::from_dense(&expm_dense(&gen, 1e-18)?))
    }
}

/// Dense complex matrix exponential by scaled Taylor series and squaring.
pub fn expm_dense(m: &DMatrix<Complex64>, tol: f64) -> Result<DMatrix<Complex64>> {
    let n = m.nrows();
    let norm = (0..n)
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if !norm.is_finite() {
        return Err(Error::invalid("matrix exponential of a non-finite matrix"));
    }
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m * Complex64::new(0.5f64.powi(squarings), 0.0);
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = sum.clone();
    let mut converged = false;
    for k in 1..=100 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("dense matrix exponential did not converge".into()));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// One product of single-mode factors, applied right to left.
#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: Complex64,
    factors: Vec<(usize, ModeMatrix)>,
}

/// A linear combination of products of single-mode operators.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    terms: Vec<Term>,
}

impl FockOperator {
    pub fn identity() -> Self {
        FockOperator { terms: vec![Term { coeff: Complex64::new(1.0, 0.0), factors: vec![] }] }
    }

    pub fn single(mode: usize, m: ModeMatrix) -> Self {
        FockOperator { terms: vec![Term { coeff: Complex64::new(1.0, 0.0), factors: vec![(mode, m)] }] }
    }

    /// `coeff · m_1 m_2 …` with the factors listed left to right.
    pub fn product(coeff: Complex64, factors: Vec<(usize, ModeMatrix)>) -> Self {
        FockOperator { terms: vec![Term { coeff, factors }] }
    }

    pub fn plus(mut self, other: FockOperator) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        for t in &mut self.terms {
            t.coeff *= s;
        }
        self
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.conj(),
                    factors: t.factors.iter().rev().map(|(md, m)| (*md, m.adjoint())).collect(),
                })
                .collect(),
        }
    }

    fn sum_over_modes(arena: &FockArena, m: &ModeMatrix, weight: f64) -> Self {
        (0..MODES)
            .map(|j| FockOperator::single(j, m.clone()).scaled(Complex64::new(weight, 0.0)))
            .reduce(FockOperator::plus)
            .unwrap_or_else(|| FockOperator { terms: vec![] })
            .check_levels(arena)
    }

    fn check_levels(self, arena: &FockArena) -> Self {
        debug_assert!(self.terms.iter().all(|t| t.factors.iter().all(|(_, m)| m.levels == arena.cutoff)));
        self
    }

    /// `X3 = (Q1 + Q2 + Q3)/√6`
    pub fn x3(arena: &FockArena) -> Self {
        Self::sum_over_modes(arena, &arena.position, 1.0 / 6f64.sqrt())
    }

    /// `Y3 = (P1 + P2 + P3)/√6`
    pub fn y3(arena: &FockArena) -> Self {
        Self::sum_over_modes(arena, &arena.momentum, 1.0 / 6f64.sqrt())
    }

    /// Collective lowering operator `A = (a1 + a2 + a3)/√3`.
    pub fn collective_lowering(arena: &FockArena) -> Self {
        Self::sum_over_modes(arena, &arena.lowering, 1.0 / 3f64.sqrt())
    }

    /// `(−1)^{n1+n2+n3}`
    pub fn parity(arena: &FockArena) -> Self {
        FockOperator::product(
            Complex64::new(1.0, 0.0),
            (0..MODES).map(|j| (j, arena.parity.clone())).collect(),
        )
    }

    pub fn mode(arena: &FockArena, mode: usize, m: &ModeMatrix) -> Result<Self> {
        arena.check_mode(mode)?;
        if m.levels != arena.cutoff {
            return Err(Error::invalid("mode matrix size does not match the arena cutoff"));
        }
        Ok(FockOperator::single(mode, m.clone()))
    }

    pub fn apply(&self, arena: &FockArena, v: &[Complex64]) -> Result<Vec<Complex64>> {
        arena.check_len(v.len())?;
        let mut out = vec![ZERO; arena.dim];
        let mut buf = vec![ZERO; arena.dim];
        for t in &self.terms {
            let mut cur = v.to_vec();
            for (mode, m) in t.factors.iter().rev() {
                arena.check_mode(*mode)?;
                arena.apply_mode_into(m, *mode, &cur, &mut buf);
                std::mem::swap(&mut cur, &mut buf);
            }
            for (o, c) in out.iter_mut().zip(&cur) {
                *o += t.coeff * c;
            }
        }
        Ok(out)
    }

    /// Dense embedding, for small arenas only.
    pub fn to_dense(&self, arena: &FockArena) -> Result<DMatrix<Complex64>> {
        if arena.dim > MAX_DENSE_DIM {
            return Err(Error::invalid(format!(
                "dense embedding refused for dimension {} > {MAX_DENSE_DIM}",
                arena.dim
            )));
        }
        let mut m = DMatrix::zeros(arena.dim, arena.dim);
        let mut e = vec![ZERO; arena.dim];
        for c in 0..arena.dim {
            e[c] = Complex64::new(1.0, 0.0);
            let col = self.apply(arena, &e)?;
            e[c] = ZERO;
            for (r, v) in col.into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        Ok(m)
    }
}

/// A state vector in a [`FockArena`].
#[derive(Debug, Clone, PartialEq)]
pub struct KetVector {
    pub cutoff: usize,
    pub amplitudes: Vec<Complex64>,
    /// Probability mass discarded by truncation when the state was prepared.
    pub tail_mass: f64,
}

impl KetVector {
    pub fn basis(arena: &FockArena, n: [usize; 3]) -> Result<Self> {
        if n.iter().any(|&x| x >= arena.cutoff) {
            return Err(Error::invalid(format!("occupation {n:?} exceeds cutoff {}", arena.cutoff)));
        }
        let mut amplitudes = vec![ZERO; arena.dim];
        amplitudes[arena.index(n)] = Complex64::new(1.0, 0.0);
        Ok(KetVector { cutoff: arena.cutoff, amplitudes, tail_mass: 0.0 })
    }

    pub fn vacuum(arena: &FockArena) -> Self {
        Self::basis(arena, [0, 0, 0]).expect("vacuum is always in range")
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &KetVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn amplitude(&self, arena: &FockArena, n: [usize; 3]) -> Complex64 {
        self.amplitudes[arena.index(n)]
    }

    pub(crate) fn check_arena(&self, arena: &FockArena) -> Result<()> {
        if self.cutoff != arena.cutoff {
            return Err(Error::invalid(format!(
                "ket with cutoff {} used with an arena of cutoff {}",
                self.cutoff, arena.cutoff
            )));
        }
        arena.check_len(self.amplitudes.len())
    }
}

/// Guard used by every coherent-amplitude input: `|z|² ≤ cutoff/4`.
pub(crate) fn tail_guard(arena: &FockArena, what: &str, z: Complex64) -> Result<()> {
    let limit = arena.cutoff as f64 / 4.0;
    if z.norm_sqr() > limit {
        return Err(Error::Truncation(format!(
            "|{what}|^2 = {:.4} exceeds cutoff/4 = {limit}; increase the cutoff",
            z.norm_sqr()
        )));
    }
    Ok(())
}

/// Normalised truncated product coherent state `|α1, α2, α3⟩`.
pub fn coherent_ket(arena: &FockArena, alpha: &CoherentAmplitudes) -> Result<KetVector> {
    let c = arena.cutoff;
    let mut per_mode = Vec::with_capacity(MODES);
    let mut kept = 1.0;
    for (j, a) in alpha.0.iter().enumerate() {
        tail_guard(arena, &format!("alpha{}", j + 1), *a)?;
        let mut v = vec![ZERO; c];
        v[0] = Complex64::new((-a.norm_sqr() / 2.0).exp(), 0.0);
        for n in 1..c {
            v[n] = v[n - 1] * a / (n as f64).sqrt();
        }
        let mass: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        kept *= mass;
        let scale = 1.0 / mass.sqrt();
        per_mode.push(v.into_iter().map(|z| z * scale).collect::<Vec<_>>());
    }
    let mut amplitudes = vec![ZERO; arena.dim];
    for (idx, amp) in amplitudes.iter_mut().enumerate() {
        let n = arena.occupations(idx);
        *amp = per_mode[0][n[0]] * per_mode[1][n[1]] * per_mode[2][n[2]];
    }
    Ok(KetVector { cutoff: c, amplitudes, tail_mass: (1.0 - kept).max(0.0) })
}
