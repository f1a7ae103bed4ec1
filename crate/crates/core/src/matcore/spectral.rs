use nalgebra::linalg::{Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Eigenvalues together with an orthonormal eigenvector basis (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `U·diag(λ)·U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.eigenvalues).conjugate_by(&self.eigenvectors)
    }

    /// Applies `f` to the eigenvalues and reassembles `U·diag(f(λ))·U*`.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexMatrix {
        let mapped: Vec<Complex64> = self.eigenvalues.iter().map(|&z| f(z)).collect();
        ComplexMatrix::from_diagonal(&mapped).conjugate_by(&self.eigenvectors)
    }

    /// Real functional calculus for Hermitian decompositions; the result is
    /// symmetrized so it is exactly Hermitian.
    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.map(|z| Complex64::new(f(z.re), 0.0)).hermitian_part()
    }

    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let deviation = h.hermitian_defect();
    if deviation > tolerances().hermitian * h.norm() {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(hermitian_eig_unchecked(&h.hermitian_part()))
}

pub(crate) fn hermitian_eig_unchecked(h: &ComplexMatrix) -> SpectralDecomposition {
    let n = h.dim();
    let eig = SymmetricEigen::new(h.as_nalgebra().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| Complex64::new(eig.eigenvalues[k], 0.0)).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    SpectralDecomposition { eigenvalues, eigenvectors }
}

/// Eigendecomposition of a normal matrix (e.g. a unitary) through the complex
/// Schur form, whose triangular factor is diagonal for normal input.
pub fn normal_eig(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let defect = m.normality_defect();
    if defect > tolerances().reconstruction * scale * scale {
        return Err(Error::InvalidArgument(format!("matrix is not normal (defect {defect:.3e})")));
    }
    let (q, t) = Schur::new(m.as_nalgebra().clone()).unpack();
    let n = m.dim();
    let eigenvalues = (0..n).map(|i| t[(i, i)]).collect();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: ComplexMatrix::from_nalgebra(q) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matrix::{ONE, ZERO};

    #[test]
    fn diagonal_input_sorts_eigenvalues() {
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 1.0]);
        let eig = hermitian_eig(&d).unwrap();
        assert_eq!(eig.real_eigenvalues(), vec![1.0, 3.0]);
        let u = &eig.eigenvectors;
        assert!((u.get(0, 0).norm() - 0.0).abs() < 1e-15);
        assert!((u.get(1, 0).norm() - 1.0).abs() < 1e-15);
        assert!((u.get(0, 1).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&x).unwrap();
        let ev = eig.real_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().distance(&x) < 1e-14);
        assert!(eig.eigenvectors.unitary_defect() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn normal_eig_of_a_rotation() {
        let m = ComplexMatrix::from_rows(&[[ZERO, -ONE], [ONE, ZERO]]).unwrap();
        let eig = normal_eig(&m).unwrap();
        assert!(eig.reconstruct().distance(&m) < 1e-14);
        let mut ims: Vec<f64> = eig.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
    }
}
