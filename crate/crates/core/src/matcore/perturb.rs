use nalgebra::linalg::SVD;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// An invertible matrix within `eps` of `x` (operator norm).
///
/// Invertible input is returned unchanged. Otherwise every singular value
/// below `eps/2` is raised to `eps/2`, keeping both singular frames.
pub fn approximate_invertible(x: &ComplexMatrix, eps: f64) -> Result<ComplexMatrix> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let floor = eps / 2.0;
    if x.is_zero() {
        return Ok(ComplexMatrix::scalar(x.dim(), Complex64::new(floor, 0.0)));
    }
    let svd = SVD::new(x.as_nalgebra().clone(), true, true);
    let largest = svd.singular_values.max();
    let smallest = svd.singular_values.min();
    if smallest > tolerances().singular * largest {
        return Ok(x.clone());
    }
    let floored = svd.singular_values.map(|s| Complex64::new(s.max(floor), 0.0));
    let w = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    Ok(ComplexMatrix::from_nalgebra(w * DMatrix::from_diagonal(&floored) * v_t))
}
