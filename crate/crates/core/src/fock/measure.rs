use num_complex::Complex64;

use super::{tail_guard, FockArena, FockOperator, KetVector, MODES, ZERO};
use crate::error::{Error, Result};

/// Absolute slack below which a growing delta is treated as round-off.
const DELTA_NOISE: f64 = 1e-13;

fn norm_sqr_checked(ket: &KetVector) -> Result<f64> {
    let n = ket.norm_sqr();
    if n > 0.0 && n.is_finite() {
        Ok(n)
    } else {
        Err(Error::Numeric("state has zero or non-finite norm".into()))
    }
}

/// `⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩`
pub fn expect(arena: &FockArena, ket: &KetVector, op: &FockOperator) -> Result<Complex64> {
    ket.check_arena(arena)?;
    let n = norm_sqr_checked(ket)?;
    let o = op.apply(arena, &ket.amplitudes)?;
    let num: Complex64 = ket.amplitudes.iter().zip(&o).map(|(a, b)| a.conj() * b).sum();
    Ok(num / n)
}

/// `⟨(O − ⟨O⟩)^order⟩` for a Hermitian `O`, by repeated application.
pub fn central_moment(arena: &FockArena, ket: &KetVector, op: &FockOperator, order: u32) -> Result<f64> {
    ket.check_arena(arena)?;
    let n = norm_sqr_checked(ket)?;
    let mean = expect(arena, ket, op)?.re;
    let shifted = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        let mut w = op.apply(arena, v)?;
        for (x, y) in w.iter_mut().zip(v) {
            *x -= mean * y;
        }
        Ok(w)
    };
    let mut left = ket.amplitudes.clone();
    for _ in 0..order / 2 {
        left = shifted(&left)?;
    }
    let right = if order % 2 == 1 { shifted(&left)? } else { left.clone() };
    let v: Complex64 = left.iter().zip(&right).map(|(a, b)| a.conj() * b).sum();
    Ok(v.re / n)
}

/// Central moment of `X3 = (Q1 + Q2 + Q3)/√6` of the given order.
pub fn moment_x3(arena: &FockArena, ket: &KetVector, order: u32) -> Result<f64> {
    central_moment(arena, ket, &FockOperator::x3(arena), order)
}

/// `⟨A†ᵏ Aᵏ⟩ = ‖Aᵏψ‖² / ‖ψ‖²` for the collective mode `A`.
pub fn mean_power(arena: &FockArena, ket: &KetVector, k: u32) -> Result<f64> {
    ket.check_arena(arena)?;
    let n = norm_sqr_checked(ket)?;
    let a = FockOperator::collective_lowering(arena);
    let mut v = ket.amplitudes.clone();
    for _ in 0..k {
        v = a.apply(arena, &v)?;
    }
    Ok(v.iter().map(|z| z.norm_sqr()).sum::<f64>() / n)
}

/// `⟨D(β) Π D†(β)⟩` with `Π = (−1)^{n1+n2+n3}` and `D(β) = ⊗_j exp(β_j a_j† − β_j* a_j)`.
pub fn displaced_parity(arena: &FockArena, ket: &KetVector, betas: [Complex64; 3]) -> Result<f64> {
    ket.check_arena(arena)?;
    let n = norm_sqr_checked(ket)?;
    let mut v = ket.amplitudes.clone();
    let mut buf = vec![ZERO; arena.dim];
    for (j, b) in betas.iter().enumerate().take(MODES) {
        if !b.is_finite() {
            return Err(Error::invalid(format!("beta{} is not finite", j + 1)));
        }
        tail_guard(arena, &format!("beta{}", j + 1), *b)?;
        if *b == ZERO {
            continue;
        }
        let d = arena.displacement(-b)?;
        arena.apply_mode_into(&d, j, &v, &mut buf);
        std::mem::swap(&mut v, &mut buf);
    }
    let mut acc = 0.0;
    for (idx, z) in v.iter().enumerate() {
        let occ = arena.occupations(idx);
        let sign = if (occ[0] + occ[1] + occ[2]) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * z.norm_sqr();
    }
    Ok(acc / n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub value: f64,
    /// `value − previous value`; `None` on the first row.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Set when some `|delta|` grows from one cutoff to the next.
    pub non_monotone: bool,
}

impl ConvergenceReport {
    pub fn last_delta(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.delta)
    }
}

/// Evaluates `quantity` at each cutoff and tabulates successive differences.
pub fn convergence_report<F>(mut quantity: F, cutoffs: &[usize]) -> Result<ConvergenceReport>
where
    F: FnMut(usize) -> Result<f64>,
{
    if cutoffs.len() < 2 {
        return Err(Error::invalid("convergence report needs at least two cutoffs"));
    }
    if cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("cutoffs must be strictly increasing"));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(cutoffs.len());
    for &c in cutoffs {
        let value = quantity(c)?;
        let delta = rows.last().map(|r| value - r.value);
        rows.push(ConvergenceRow { cutoff: c, value, delta });
    }
    let deltas: Vec<f64> = rows.iter().filter_map(|r| r.delta.map(f64::abs)).collect();
    let non_monotone = deltas.windows(2).any(|w| w[1] > w[0] + DELTA_NOISE);
    Ok(ConvergenceReport { rows, non_monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_arena, coherent_ket, s3_unitary};
    use crate::gaussian::CoherentAmplitudes;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_quadrature_variance() {
        let ar = build_arena(6).unwrap();
        let vac = KetVector::vacuum(&ar);
        assert_abs_diff_eq!(moment_x3(&ar, &vac, 2).unwrap(), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(moment_x3(&ar, &vac, 4).unwrap(), 3.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(moment_x3(&ar, &vac, 3).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_parity() {
        let ar = build_arena(6).unwrap();
        let vac = KetVector::vacuum(&ar);
        assert_eq!(displaced_parity(&ar, &vac, [ZERO; 3]).unwrap(), 1.0);
    }

    #[test]
    fn coherent_parity_identity() {
        let ar = build_arena(12).unwrap();
        let a = Complex64::new(0.5, 0.0);
        let k = coherent_ket(&ar, &CoherentAmplitudes::new([a, ZERO, ZERO]).unwrap()).unwrap();
        assert_abs_diff_eq!(displaced_parity(&ar, &k, [ZERO; 3]).unwrap(), (-0.5f64).exp(), epsilon = 1e-9);
        // Displacing onto the coherent amplitude recovers the vacuum value.
        assert_abs_diff_eq!(displaced_parity(&ar, &k, [a, ZERO, ZERO]).unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn coherent_mean_power() {
        let ar = build_arena(12).unwrap();
        let alpha = CoherentAmplitudes::real([0.3, 0.5, -0.2]).unwrap();
        let k = coherent_ket(&ar, &alpha).unwrap();
        let abar2 = (0.6f64 / 3f64.sqrt()).powi(2);
        for p in 1..=3 {
            assert_abs_diff_eq!(mean_power(&ar, &k, p).unwrap(), abar2.powi(p as i32), epsilon = 1e-9);
        }
    }

    #[test]
    fn mismatched_arena_rejected() {
        let a6 = build_arena(6).unwrap();
        let a7 = build_arena(7).unwrap();
        let vac = KetVector::vacuum(&a6);
        assert!(expect(&a7, &vac, &FockOperator::x3(&a7)).is_err());
        assert!(moment_x3(&a7, &vac, 2).is_err());
    }

    #[test]
    fn parity_guard() {
        let ar = build_arena(8).unwrap();
        let vac = KetVector::vacuum(&ar);
        let big = Complex64::new(1.5, 0.0);
        assert!(matches!(displaced_parity(&ar, &vac, [big, ZERO, ZERO]), Err(Error::Truncation(_))));
    }

    #[test]
    fn report_validation_and_constant_series() {
        assert!(convergence_report(|_| Ok(1.0), &[8]).is_err());
        assert!(convergence_report(|_| Ok(1.0), &[8, 8]).is_err());
        let r = convergence_report(
            |c| Ok(KetVector::vacuum(&build_arena(c)?).norm()),
            &[4, 6, 8],
        )
        .unwrap();
        assert!(r.rows.iter().all(|row| row.value == 1.0));
        assert_eq!(r.rows[0].delta, None);
        assert_eq!(r.last_delta(), Some(0.0));
        assert!(!r.non_monotone);
    }

    #[test]
    fn report_flags_growth() {
        let vals = [1.0, 1.1, 1.11, 1.5];
        let r = convergence_report(|c| Ok(vals[c - 2]), &[2, 3, 4, 5]).unwrap();
        assert!(r.non_monotone);
    }

    #[test]
    fn squeezed_vacuum_variance_small_cutoff() {
        let ar = build_arena(10).unwrap();
        let u = s3_unitary(&ar, 0.1).unwrap();
        let psi = u.apply(&KetVector::vacuum(&ar)).unwrap();
        assert_abs_diff_eq!(moment_x3(&ar, &psi, 2).unwrap(), (-0.4f64).exp() / 4.0, epsilon = 1e-6);
    }
}
