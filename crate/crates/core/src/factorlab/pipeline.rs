//! End-to-end factorization of special unitaries and of matrices with
//! positive determinant.
//!
//! A special unitary `u` is written `exp(c)` with `c = 2πi·a` traceless; `c`
//! is a commutator, split into pairs with Hermitian right slots; the sum is
//! exponentiated by Trotter steps, and each pair's exponential by the
//! group-commutator product, whose blocks are all positive.

use std::f64::consts::TAU;

use super::commutators::{hermitian_pair_split, shoda_commutator};
use super::exponential::commutator_block;
use super::factorization::{FactorizationSchedule, PositiveFactorization};
use crate::error::{Error, Result};
use crate::matcore::{polar_decompose, traceless_unitary_log, ComplexMatrix, I};
use crate::tolerance::tolerances;

/// Commutator pairs below this fraction of `‖c‖` are dropped.
const NEGLIGIBLE_PAIR: f64 = 1e-13;

/// Positive factors approximating a unitary with determinant one.
pub fn unitary_to_positive_factors(u: &ComplexMatrix, schedule: &FactorizationSchedule) -> Result<PositiveFactorization> {
    schedule.validate()?;
    let n = u.dim();
    let log = traceless_unitary_log(u)?;
    let a = &log.hermitian;
    if a.norm() <= 1e-14 {
        schedule.check_budget(0)?;
        return Ok(PositiveFactorization::new(u.clone(), vec![ComplexMatrix::identity(n)], "identity", *schedule));
    }

    let c = a.scale(I * TAU);
    let shoda = shoda_commutator(&c)?;
    let (x, y) = &shoda.pairs[0];
    let split = hermitian_pair_split(x, y)?;
    let c_norm = c.norm();
    let pairs: Vec<_> = split
        .pairs
        .into_iter()
        .filter(|(x, y)| x.commutator(y).norm() > NEGLIGIBLE_PAIR * c_norm)
        .collect();
    schedule.check_budget(pairs.len())?;

    let steps = f64::from(schedule.trotter_steps);
    let blocks = pairs
        .iter()
        .map(|(x, y)| {
            // [x, y]/T = [s·(x − tr(x)/n)/T, y/s]; centering x leaves the
            // commutator unchanged and s balances the two norms.
            let shift = x.trace() / n as f64;
            let centered = x - &ComplexMatrix::scalar(n, shift);
            let x_norm = centered.norm() / steps;
            let y_norm = y.norm();
            let s = (y_norm / x_norm).sqrt();
            commutator_block(&centered.scale_real(s / steps), &y.scale_real(1.0 / s), schedule.commutator_steps)
        })
        .collect::<Result<Vec<_>>>()?;

    let repeats = (schedule.commutator_steps as usize).pow(2);
    let mut factors = Vec::with_capacity(schedule.commutator_stage_count(pairs.len()) as usize);
    for _ in 0..schedule.trotter_steps {
        for block in &blocks {
            for _ in 0..repeats {
                factors.extend(block.iter().cloned());
            }
        }
    }
    Ok(PositiveFactorization::new(u.clone(), factors, "unitary-commutator", *schedule))
}

/// Positive factors approximating an invertible matrix with real positive
/// determinant: the unitary polar part is factored and the positive polar
/// part appended as the last factor.
pub fn matrix_to_positive_factors(x: &ComplexMatrix, schedule: &FactorizationSchedule) -> Result<PositiveFactorization> {
    schedule.validate()?;
    let tol = tolerances();
    let smallest = x.smallest_singular_value();
    if smallest <= tol.singular * x.norm() || smallest == 0.0 {
        return Err(Error::NotInvertible { smallest_singular: smallest });
    }
    let det = x.determinant();
    if det.re <= 0.0 || det.im.abs() > tol.det_real * det.norm() {
        return Err(Error::DeterminantObstruction { det });
    }
    if x.is_hermitian(tol.hermitian) {
        let h = x.hermitian_part();
        let min = crate::matcore::hermitian_eig_unchecked(&h).eigenvalues[0].re;
        if min > 0.0 {
            schedule.check_budget(0)?;
            return Ok(PositiveFactorization::new(x.clone(), vec![h], "positive", *schedule));
        }
    }
    let polar = polar_decompose(x)?;
    let unitary = unitary_to_positive_factors(&polar.unitary, schedule)?;
    let mut factors = unitary.factors;
    factors.push(polar.positive);
    Ok(PositiveFactorization::new(x.clone(), factors, "polar-commutator", *schedule))
}
