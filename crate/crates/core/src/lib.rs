//! Factorization of complex square matrices into finite products of positive
//! definite matrices, and the determinant and trace obstructions that decide
//! which matrices are reachable.
//!
//! [`matcore`] holds the dense kernels, [`factorlab`] the constructions,
//! [`obstruction`] the invariants they must respect. Tolerances are global,
//! see [`tolerance`].

pub mod error;
pub mod factorlab;
pub mod matcore;
pub mod obstruction;
pub mod sample;
pub mod tolerance;

pub use error::{Error, Result};
pub use factorlab::{
    commutator_exp_factors, conjugate_positive_as_two, direct_sum_factorization, eps_dense_correction,
    finite_spectrum_adjust, hermitian_pair_split, matrix_to_positive_factors, shoda_commutator, trotter_factors,
    two_positive_split, unitary_to_positive_factors, zero_diagonal_commutators, CommutatorDecomposition,
    FactorizationAudit, FactorizationSchedule, FiniteSpectrumAdjustment, PositiveFactorization, SpectralGroups,
    TorusCorrection,
};
pub use matcore::{
    block_invertible_decomposition, hermitian_eig, matrix_exp, polar_decompose, BlockFactors, ComplexMatrix, PolarParts,
    SpectralDecomposition, TracelessLog,
};
pub use num_complex::Complex64;
pub use obstruction::{
    det_nonneg_check, dhs_residue_of_exponential, estimate_group_g, scalar_obstruction_distance,
    unitary_product_trace_identity, DeterminantResidue, GroupEstimate, ObstructionReport, TraceFunctional, TraceKind,
};
pub use tolerance::{tolerances, Tolerances};
