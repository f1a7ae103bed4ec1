//! Determinant and trace obstructions to positive factorization.

mod determinant;
mod scalar;
mod trace;

pub use determinant::{det_nonneg_check, DeterminantCheck, DET_CHECK_TOL};
pub use scalar::{
    default_ladder, estimate_group_g, feasible_distance_search, is_root_of_unity, scalar_distance_lower_bound,
    scalar_obstruction_distance, GroupEstimate, ObstructionReport, ROOT_TOL,
};
pub use trace::{
    dhs_residue_of_exponential, unitary_product_trace_identity, DeterminantResidue, TraceFunctional, TraceIdentityRecord,
    TraceKind,
};
