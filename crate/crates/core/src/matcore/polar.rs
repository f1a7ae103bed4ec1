use nalgebra::linalg::SVD;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// `x = unitary · positive` with `positive = (x*x)^{1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarParts {
    pub unitary: ComplexMatrix,
    pub positive: ComplexMatrix,
}

impl PolarParts {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.unitary * &self.positive
    }
}

/// Polar decomposition of an invertible matrix, computed from the SVD
/// `x = W Σ V*` as `u = W V*`, `p = V Σ V*`.
pub fn polar_decompose(x: &ComplexMatrix) -> Result<PolarParts> {
    let svd = SVD::new(x.as_nalgebra().clone(), true, true);
    let sigma = &svd.singular_values;
    let largest = sigma.max();
    let smallest = sigma.min();
    if smallest <= tolerances().singular * largest || smallest == 0.0 {
        return Err(Error::NotInvertible { smallest_singular: smallest });
    }
    let w = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let v = v_t.adjoint();
    let unitary = ComplexMatrix::from_nalgebra(&w * &v_t);
    let sigma_c = sigma.map(|s| num_complex::Complex64::new(s, 0.0));
    let positive = ComplexMatrix::from_nalgebra(&v * nalgebra::DMatrix::from_diagonal(&sigma_c) * &v_t);
    Ok(PolarParts { unitary, positive: positive.hermitian_part() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::spectral::hermitian_eig;

    #[test]
    fn positive_input_has_trivial_unitary_part() {
        let p = ComplexMatrix::from_real_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let parts = polar_decompose(&p).unwrap();
        assert!(parts.unitary.distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(parts.positive.distance(&p) < 1e-14);
    }

    #[test]
    fn unitary_input_has_trivial_positive_part() {
        let u = ComplexMatrix::from_real_rows(&[[0.6, -0.8], [0.8, 0.6]]).unwrap();
        let parts = polar_decompose(&u).unwrap();
        assert!(parts.unitary.distance(&u) < 1e-14);
        assert!(parts.positive.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn hand_computed_example() {
        // x*x = diag(1, 4), so p = diag(1, 2) and u = x p⁻¹.
        let x = ComplexMatrix::from_real_rows(&[[0.0, -2.0], [1.0, 0.0]]).unwrap();
        let parts = polar_decompose(&x).unwrap();
        let u = ComplexMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(parts.unitary.distance(&u) < 1e-14);
        assert!(parts.positive.distance(&ComplexMatrix::from_real_diagonal(&[1.0, 2.0])) < 1e-14);
        let eig = hermitian_eig(&parts.positive).unwrap();
        assert!(eig.real_eigenvalues().iter().all(|&l| l > 0.0));
    }

    #[test]
    fn singular_input_is_rejected() {
        let x = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(polar_decompose(&x), Err(Error::NotInvertible { .. })));
    }
}
