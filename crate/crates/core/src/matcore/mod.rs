//! Dense complex matrix kernels: the matrix carrier, Hermitian and normal
//! eigendecompositions, polar decomposition, exponential and logarithms, the
//! Schur-complement block factorization and invertible perturbation.

mod blocks;
mod expm;
mod matrix;
mod perturb;
mod polar;
mod spectral;

pub use blocks::{block_invertible_decomposition, BlockFactors};
pub use expm::{hermitian_exp, matrix_exp, positive_log, traceless_unitary_log, TracelessLog};
pub use matrix::ComplexMatrix;
pub use perturb::approximate_invertible;
pub use polar::{polar_decompose, PolarParts};
pub use spectral::{hermitian_eig, normal_eig, SpectralDecomposition};

pub(crate) use matrix::{I, ONE, ZERO};
pub(crate) use spectral::hermitian_eig_unchecked;
