use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{FockArena, KetVector, MAX_DENSE_DIM, MODES, ZERO};
use crate::error::{ensure_finite, Error, Result};

/// Bound on `‖U†U − I‖` (largest entry) over the low-photon block.
pub const UNITARITY_TOL: f64 = 1e-6;

/// Generator norm handled by one Taylor step. Larger steps need fewer
/// generator applications in total; the largest Taylor term, and with it the
/// round-off, grows like `e^STEP_NORM`.
const STEP_NORM: f64 = 6.0;
const MAX_TAYLOR_TERMS: usize = 80;
const TAYLOR_TOL: f64 = 1e-17;

/// `U = exp(iλ Σ_{j≠k} Q_j P_k)` on a truncated arena, applied to vectors.
///
/// The truncated generator is exactly anti-Hermitian (the `Q_j` and `P_k`
/// are Hermitian and commute for `j ≠ k`), so `U` is applied by splitting
/// `exp(K) = exp(K/s)^s` and summing the Taylor series of each factor.
#[derive(Debug, Clone)]
pub struct S3Unitary {
    arena: FockArena,
    lambda: f64,
    steps: usize,
    generator_bound: f64,
    unitarity_residual: f64,
    vacuum_boundary_mass: f64,
}

/// Builds the truncated unitary and runs the unitarity post-check on the
/// block `n_j ≤ cutoff/2`.
pub fn s3_unitary(arena: &FockArena, lambda: f64) -> Result<S3Unitary> {
    ensure_finite("lambda", lambda)?;
    let q_max = quadrature_norm(arena);
    let generator_bound = 6.0 * lambda.abs() * q_max * q_max;
    let steps = (generator_bound / STEP_NORM).ceil().max(1.0) as usize;
    let mut u = S3Unitary {
        arena: arena.clone(),
        lambda,
        steps,
        generator_bound,
        unitarity_residual: f64::NAN,
        vacuum_boundary_mass: f64::NAN,
    };
    u.unitarity_residual = u.low_block_residual()?;
    if u.unitarity_residual.is_nan() || u.unitarity_residual > UNITARITY_TOL {
        return Err(Error::Truncation(format!(
            "unitarity residual {:.3e} exceeds {UNITARITY_TOL:e} at lambda = {lambda}, cutoff = {}; \
             use a larger cutoff or a smaller lambda",
            u.unitarity_residual, arena.cutoff
        )));
    }
    let vac = u.apply(&KetVector::vacuum(arena))?;
    u.vacuum_boundary_mass = boundary_mass(arena, &vac.amplitudes, 1);
    Ok(u)
}

/// Spectral norm of the truncated single-mode `Q` (equal to that of `P`).
fn quadrature_norm(arena: &FockArena) -> f64 {
    let q = arena.position.to_dense().map(|z| z.re);
    let eig = SymmetricEigen::new(q);
    eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Probability mass on basis states with some `n_j = cutoff − 1`, maximised
/// over the `width` interleaved vectors.
fn boundary_mass(arena: &FockArena, v: &[Complex64], width: usize) -> f64 {
    let top = arena.cutoff - 1;
    let mut mass = vec![0.0; width];
    for idx in 0..arena.dim {
        if arena.occupations(idx).contains(&top) {
            for (k, m) in mass.iter_mut().enumerate() {
                *m += v[idx * width + k].norm_sqr();
            }
        }
    }
    mass.into_iter().fold(0.0, f64::max)
}

impl S3Unitary {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn arena(&self) -> &FockArena {
        &self.arena
    }

    /// Number of Taylor steps used per application.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Rigorous bound on `‖K‖` used to choose the step count.
    pub fn generator_bound(&self) -> f64 {
        self.generator_bound
    }

    /// Largest entry of `U†U − I` over the block `n_j ≤ cutoff/2`.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// Mass of `U|000⟩` on states touching the top Fock level; a cheap
    /// indicator of truncation error in the squeezed vacuum.
    pub fn vacuum_boundary_mass(&self) -> f64 {
        self.vacuum_boundary_mass
    }

    /// `K V` for `width` interleaved vectors.
    fn generator_block(&self, width: usize, v: &[Complex64], out: &mut [Complex64], scratch: &mut Scratch) {
        let ar = &self.arena;
        for k in 0..MODES {
            ar.apply_mode_block(&ar.momentum, k, width, v, &mut scratch.p[k]);
        }
        out.iter_mut().for_each(|z| *z = ZERO);
        let coeff = Complex64::new(0.0, self.lambda);
        for j in 0..MODES {
            let (a, b) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            for ((s, x), y) in scratch.sum.iter_mut().zip(&scratch.p[a]).zip(&scratch.p[b]) {
                *s = x + y;
            }
            ar.apply_mode_block(&ar.position, j, width, &scratch.sum, &mut scratch.q);
            for (o, x) in out.iter_mut().zip(&scratch.q) {
                *o += coeff * x;
            }
        }
    }

    fn apply_block(&self, width: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let len = self.arena.dim * width;
        if v.len() != len {
            return Err(Error::invalid("block length does not match the arena"));
        }
        let mut scratch = Scratch::new(len);
        let mut acc = v.to_vec();
        let mut term = vec![ZERO; len];
        let mut next = vec![ZERO; len];
        let h = 1.0 / self.steps as f64;
        for _ in 0..self.steps {
            term.copy_from_slice(&acc);
            let scale = acc.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            let mut converged = false;
            for n in 1..=MAX_TAYLOR_TERMS {
                self.generator_block(width, &term, &mut next, &mut scratch);
                let f = h / n as f64;
                let mut size = 0.0f64;
                for (t, x) in term.iter_mut().zip(&next) {
                    *t = x * f;
                    size = size.max(t.norm());
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                }
                if size <= TAYLOR_TOL * scale {
                    converged = true;
                    break;
                }
            }
            if !converged || acc.iter().any(|z| !z.is_finite()) {
                return Err(Error::Numeric("Taylor series for the squeeze unitary did not converge".into()));
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, ket: &KetVector) -> Result<KetVector> {
        ket.check_arena(&self.arena)?;
        let amplitudes = self.apply_block(1, &ket.amplitudes)?;
        Ok(KetVector { cutoff: ket.cutoff, amplitudes, tail_mass: ket.tail_mass })
    }

    /// `U|n1 n2 n3⟩`
    pub fn column(&self, n: [usize; 3]) -> Result<KetVector> {
        self.apply(&KetVector::basis(&self.arena, n)?)
    }

    /// `⟨m|U|n⟩`
    pub fn element(&self, m: [usize; 3], n: [usize; 3]) -> Result<Complex64> {
        Ok(self.column(n)?.amplitude(&self.arena, m))
    }

    /// Columns of `U` for the given basis states, as a `dim × len` matrix.
    pub fn columns(&self, states: &[[usize; 3]]) -> Result<DMatrix<Complex64>> {
        let width = states.len();
        let dim = self.arena.dim;
        let mut block = vec![ZERO; dim * width];
        for (k, n) in states.iter().enumerate() {
            if n.iter().any(|&x| x >= self.arena.cutoff) {
                return Err(Error::invalid(format!("occupation {n:?} exceeds the cutoff")));
            }
            block[self.arena.index(*n) * width + k] = Complex64::new(1.0, 0.0);
        }
        let out = self.apply_block(width, &block)?;
        Ok(DMatrix::from_row_slice(dim, width, &out))
    }

    /// The full matrix, for small arenas only.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.arena.dim > MAX_DENSE_DIM {
            return Err(Error::invalid(format!(
                "dense unitary refused for dimension {} > {MAX_DENSE_DIM}",
                self.arena.dim
            )));
        }
        let all: Vec<[usize; 3]> = (0..self.arena.dim).map(|i| self.arena.occupations(i)).collect();
        self.columns(&all)
    }

    fn low_block_residual(&self) -> Result<f64> {
        let half = self.arena.cutoff / 2;
        let states: Vec<[usize; 3]> = (0..self.arena.dim)
            .map(|i| self.arena.occupations(i))
            .filter(|n| n.iter().all(|&x| x <= half))
            .collect();
        let cols = self.columns(&states)?;
        // C†C = (AᵀA + BᵀB) + i(AᵀB − BᵀA) with C = A + iB, in real arithmetic.
        let a = cols.map(|z| z.re);
        let b = cols.map(|z| z.im);
        let at = a.transpose();
        let bt = b.transpose();
        let re = &at * &a + &bt * &b;
        let im = &at * &b - &bt * &a;
        let gram = re.zip_map(&im, Complex64::new);
        let mut worst = 0.0f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                let d = (gram[(i, j)] - want).norm();
                if d.is_nan() {
                    return Ok(f64::NAN);
                }
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }
}

struct Scratch {
    p: [Vec<Complex64>; 3],
    sum: Vec<Complex64>,
    q: Vec<Complex64>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Scratch {
            p: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
            sum: vec![ZERO; len],
            q: vec![ZERO; len],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_arena, expm_dense, FockOperator};

    #[test]
    fn zero_lambda_is_identity() {
        let ar = build_arena(4).unwrap();
        let u = s3_unitary(&ar, 0.0).unwrap().to_dense().unwrap();
        let id = DMatrix::<Complex64>::identity(64, 64);
        assert!((u - id).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn matches_dense_exponential_on_small_arena() {
        let ar = build_arena(5).unwrap();
        let lambda = 0.3;
        let i = Complex64::new(0.0, lambda);
        let mut gen = FockOperator::identity().scaled(ZERO);
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    gen = gen.plus(FockOperator::product(
                        i,
                        vec![(j, ar.position().clone()), (k, ar.momentum().clone())],
                    ));
                }
            }
        }
        let k = gen.to_dense(&ar).unwrap();
        let anti = (&k + k.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(anti < 1e-14, "generator not anti-Hermitian: {anti}");
        let want = expm_dense(&k, 1e-18).unwrap();
        let got = s3_unitary(&ar, lambda).unwrap().to_dense().unwrap();
        let err = (got - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "max deviation {err}");
    }

    #[test]
    fn negative_lambda_inverts() {
        let ar = build_arena(6).unwrap();
        let fwd = s3_unitary(&ar, 0.25).unwrap();
        let back = s3_unitary(&ar, -0.25).unwrap();
        let k = KetVector::basis(&ar, [1, 0, 2]).unwrap();
        let round = back.apply(&fwd.apply(&k).unwrap()).unwrap();
        let err = round
            .amplitudes
            .iter()
            .zip(&k.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn residual_reported_and_small() {
        let ar = build_arena(8).unwrap();
        let u = s3_unitary(&ar, 0.2).unwrap();
        assert!(u.unitarity_residual() < 1e-10);
        assert!(u.vacuum_boundary_mass() > 0.0);
        assert!(u.steps() >= 1);
    }

    #[test]
    fn rejects_non_finite_lambda() {
        let ar = build_arena(3).unwrap();
        assert!(s3_unitary(&ar, f64::NAN).is_err());
    }
}
