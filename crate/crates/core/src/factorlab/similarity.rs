//! Two-factor witnesses for matrices similar to positive ones.

use super::factorization::{FactorizationSchedule, PositiveFactorization};
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix};
use crate::tolerance::tolerances;

fn two_factor_schedule() -> FactorizationSchedule {
    FactorizationSchedule { trotter_steps: 1, commutator_steps: 1, max_factors: 2 }
}

/// Writes `x = S·D·S⁻¹` (with `D` positive diagonal) as `(S·S*)·((S*)⁻¹·D·S⁻¹)`.
pub fn two_positive_split(x: &ComplexMatrix, witness: &ComplexMatrix, diagonal: &[f64]) -> Result<PositiveFactorization> {
    let n = x.dim();
    if witness.dim() != n || diagonal.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: diagonal.len().min(witness.dim()) });
    }
    if let Some(&bad) = diagonal.iter().find(|&&d| !(d.is_finite() && d > 0.0)) {
        return Err(Error::NotPositive { min_eigenvalue: bad });
    }
    let s_inv = witness.inverse()?;
    let d = ComplexMatrix::from_real_diagonal(diagonal);
    let residual = x.distance(&(&(witness * &d) * &s_inv));
    if residual > tolerances().reconstruction * x.norm() {
        return Err(Error::WitnessMismatch { residual });
    }
    let first = (witness * &witness.adjoint()).hermitian_part();
    let second = (&(&s_inv.adjoint() * &d) * &s_inv).hermitian_part();
    Ok(PositiveFactorization::new(x.clone(), vec![first, second], "two-positive", two_factor_schedule()))
}

/// The two positive factors of `v·p·v⁻¹`. With `v = u·q` polar they are
/// `u·q·p·q·u* = v·p·v*` and `u·q⁻²·u* = (v·v*)⁻¹`; the right-hand forms are
/// evaluated, which skips the rounding of the polar step.
pub(crate) fn conjugation_factors(v: &ComplexMatrix, p: &ComplexMatrix) -> Result<[ComplexMatrix; 2]> {
    let v_inv = v.inverse()?;
    let first = (&(v * p) * &v.adjoint()).hermitian_part();
    let second = (&v_inv.adjoint() * &v_inv).hermitian_part();
    Ok([first, second])
}

/// `v·p·v⁻¹` as a product of two positive definite matrices.
pub fn conjugate_positive_as_two(v: &ComplexMatrix, p: &ComplexMatrix) -> Result<PositiveFactorization> {
    if v.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: p.dim() });
    }
    let deviation = p.hermitian_defect();
    if deviation > tolerances().hermitian * p.norm() {
        return Err(Error::NotHermitian { deviation });
    }
    let lowest = hermitian_eig_unchecked(&p.hermitian_part()).eigenvalues[0].re;
    if lowest <= 0.0 {
        return Err(Error::NotPositive { min_eigenvalue: lowest });
    }
    let v_inv = v.inverse()?;
    let factors = conjugation_factors(v, p)?;
    let target = &(v * p) * &v_inv;
    Ok(PositiveFactorization::new(target, factors.to_vec(), "conjugate-two", two_factor_schedule()))
}
