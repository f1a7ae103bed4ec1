//! Factorization into finite products of positive definite matrices.

mod commutators;
mod exponential;
mod factorization;
mod pipeline;
mod similarity;
mod spectrum;
mod torus;

pub use commutators::{hermitian_pair_split, shoda_commutator, zero_diagonal_commutators, CommutatorDecomposition};
pub use exponential::{commutator_exp_factors, trotter_factors};
pub use factorization::{
    direct_sum_factorization, FactorizationAudit, FactorizationSchedule, PositiveFactorization,
};
pub use pipeline::{matrix_to_positive_factors, unitary_to_positive_factors};
pub use similarity::{conjugate_positive_as_two, two_positive_split};
pub use spectrum::{factor_adjusted_blocks, finite_spectrum_adjust, FiniteSpectrumAdjustment, SpectralGroups};
pub use torus::{arc_resolution, density_gap, eps_dense_correction, TorusCorrection};
