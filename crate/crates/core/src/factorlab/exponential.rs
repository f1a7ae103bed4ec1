//! Product formulas for exponentials.
//!
//! `exp(a + b) = lim (exp(a/n)·exp(b/n))ⁿ` and
//! `exp([a, b]) = lim (exp(−a/n)·exp(−b/n)·exp(a/n)·exp(b/n))^{n²}`.
//! For Hermitian `b` each group-commutator block equals
//! `(v·exp(−b/n)·v⁻¹)·exp(b/n)` with `v = exp(−a/n)`, i.e. a conjugated
//! positive matrix times a positive matrix.

use super::factorization::{FactorizationSchedule, PositiveFactorization};
use super::similarity::conjugation_factors;
use crate::error::{Error, Result};
use crate::matcore::{hermitian_exp, matrix_exp, ComplexMatrix};
use crate::tolerance::tolerances;

/// The `2n` factors `exp(a/n), exp(b/n), …` in product order.
pub fn trotter_factors(a: &ComplexMatrix, b: &ComplexMatrix, n: u32) -> Result<Vec<ComplexMatrix>> {
    if n == 0 {
        return Err(Error::InvalidArgument("trotter steps must be positive".into()));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let inv = 1.0 / f64::from(n);
    let ea = matrix_exp(&a.scale_real(inv));
    let eb = matrix_exp(&b.scale_real(inv));
    Ok((0..n).flat_map(|_| [ea.clone(), eb.clone()]).collect())
}

/// The three positive factors of one group-commutator block
/// `exp(−a/n)·exp(−b/n)·exp(a/n)·exp(b/n)`.
pub(crate) fn commutator_block(a: &ComplexMatrix, b: &ComplexMatrix, n: u32) -> Result<[ComplexMatrix; 3]> {
    let inv = 1.0 / f64::from(n);
    let v = matrix_exp(&a.scale_real(-inv));
    let shrink = hermitian_exp(&b.scale_real(-inv));
    let grow = hermitian_exp(&b.scale_real(inv));
    let [first, second] = conjugation_factors(&v, &shrink)?;
    Ok([first, second, grow])
}

/// Approximates `exp([a, b])` (with `b` Hermitian) by `3n²` positive factors.
pub fn commutator_exp_factors(a: &ComplexMatrix, b: &ComplexMatrix, n: u32) -> Result<PositiveFactorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("commutator steps must be positive".into()));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let deviation = b.hermitian_defect();
    if deviation > tolerances().hermitian * b.norm() {
        return Err(Error::NotHermitian { deviation });
    }
    let block = commutator_block(a, b, n)?;
    let repeats = (n as usize) * (n as usize);
    let factors: Vec<ComplexMatrix> = (0..repeats).flat_map(|_| block.iter().cloned()).collect();
    let schedule = FactorizationSchedule { trotter_steps: 1, commutator_steps: n, max_factors: 3 * u64::from(n) * u64::from(n) };
    let target = matrix_exp(&a.commutator(b));
    Ok(PositiveFactorization::new(target, factors, "group-commutator", schedule))
}
