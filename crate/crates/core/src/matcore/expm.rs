//! Matrix exponential and the two logarithms the factorization needs: the
//! Hermitian logarithm of a positive matrix, and a traceless Hermitian `a`
//! with `exp(2πi·a) = u` for a special unitary `u`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, I};
use super::spectral::{hermitian_eig, hermitian_eig_unchecked, normal_eig};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Matrix exponential. Hermitian input goes through the eigendecomposition so
/// the result is exactly Hermitian positive definite; anything else uses
/// scaling-and-squaring Padé.
pub fn matrix_exp(a: &ComplexMatrix) -> ComplexMatrix {
    if a.is_zero() {
        return ComplexMatrix::identity(a.dim());
    }
    if a.hermitian_defect() <= 1e-14 * a.norm() {
        return hermitian_exp(a);
    }
    ComplexMatrix::from_nalgebra(a.as_nalgebra().exp())
}

/// `exp(h)` for Hermitian `h` (the Hermitian part of the input is used).
pub fn hermitian_exp(h: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eig_unchecked(&h.hermitian_part()).map_real(f64::exp)
}

/// Hermitian logarithm of a positive definite matrix.
pub fn positive_log(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(p)?;
    let values = eig.real_eigenvalues();
    let min = values[0];
    let max = *values.last().expect("non-empty spectrum");
    if min <= tolerances().singular * max.abs() || min <= 0.0 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(eig.map_real(f64::ln))
}

/// A traceless Hermitian logarithm of a special unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracelessLog {
    /// `a` with `exp(2πi·a) = u` and `trace(a) = 0`.
    pub hermitian: ComplexMatrix,
    /// Per eigenvalue (in decomposition order): `-1` where the phase in
    /// `[0, 1)` was moved down by one, `0` otherwise.
    pub branch_shifts: Vec<i32>,
}

impl TracelessLog {
    /// `exp(2πi·a)`.
    pub fn exponentiate(&self) -> ComplexMatrix {
        let eig = hermitian_eig_unchecked(&self.hermitian);
        eig.map(|z| (I * TAU * z.re).exp())
    }
}

/// Takes eigenphases `θ_j ∈ [0, 1)` of `u`. Their sum is an integer `k` when
/// `det u = 1`; the `k` largest phases (lowest index first among ties) are
/// shifted by `-1` so the resulting Hermitian logarithm is traceless.
pub fn traceless_unitary_log(u: &ComplexMatrix) -> Result<TracelessLog> {
    let tol = tolerances();
    let defect = u.unitary_defect();
    if defect > tol.unitary {
        return Err(Error::NotUnitary { defect });
    }
    let det = u.determinant();
    if (det - Complex64::new(1.0, 0.0)).norm() > tol.det_one {
        return Err(Error::DeterminantObstruction { det });
    }
    let eig = normal_eig(u)?;
    let mut phases: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|z| {
            let t = (z.arg() / TAU).rem_euclid(1.0);
            if t >= 1.0 { 0.0 } else { t }
        })
        .collect();
    let k = phases.iter().sum::<f64>().round() as usize;

    let mut order: Vec<usize> = (0..phases.len()).collect();
    order.sort_by(|&a, &b| phases[b].total_cmp(&phases[a]).then(a.cmp(&b)));
    let mut branch_shifts = vec![0; phases.len()];
    for &j in order.iter().take(k) {
        phases[j] -= 1.0;
        branch_shifts[j] = -1;
    }

    let diag: Vec<Complex64> = phases.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    let hermitian = ComplexMatrix::from_diagonal(&diag).conjugate_by(&eig.eigenvectors).hermitian_part();
    Ok(TracelessLog { hermitian, branch_shifts })
}
