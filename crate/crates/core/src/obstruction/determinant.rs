use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix};
use crate::tolerance::tolerances;

/// Relative slack on the determinant's imaginary part and negative real part.
pub const DET_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantCheck {
    pub determinant: Complex64,
    pub passed: bool,
}

/// A product of positive semidefinite matrices has a nonnegative determinant.
///
/// `det Π f` is evaluated on the multiplied-out product. It passes when
/// `|Im det| ≤ 10⁻⁸·|det|` and `Re det ≥ −10⁻⁸·Π‖f‖`; the imaginary test also
/// allows an absolute rounding floor `k·n·ε·Π‖f‖`, which matters only when a
/// factor is (numerically) singular and `det` is pure rounding noise.
pub fn det_nonneg_check(factors: &[ComplexMatrix]) -> Result<DeterminantCheck> {
    let first = factors.first().ok_or_else(|| Error::InvalidArgument("empty factor list".into()))?;
    let n = first.dim();
    let tol = tolerances();
    let mut norm_product = 1.0;
    for f in factors {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
        }
        if !f.is_hermitian(tol.hermitian) {
            return Err(Error::NotHermitian { deviation: f.hermitian_defect() });
        }
        let norm = f.norm();
        let min = hermitian_eig_unchecked(&f.hermitian_part()).eigenvalues[0].re;
        if min < -tol.hermitian * norm.max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        norm_product *= norm.powi(n as i32);
    }
    let determinant = ComplexMatrix::product(n, factors).determinant();
    let floor = (factors.len() * n) as f64 * f64::EPSILON * norm_product;
    let passed = determinant.im.abs() <= DET_CHECK_TOL * determinant.norm() + floor
        && determinant.re >= -DET_CHECK_TOL * norm_product;
    Ok(DeterminantCheck { determinant, passed })
}
