use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the matrix kernels, the factorization routines and the
/// obstruction checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry count {len} is not a perfect square of the declared dimension {n}")]
    NotSquare { n: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not invertible (smallest singular value {smallest_singular:.3e})")]
    NotInvertible { smallest_singular: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    /// The determinant is not a positive real (or not 1 where a special
    /// unitary is required), so the target cannot be a product of positives.
    #[error("determinant obstruction: det = {}{:+}i is not a positive real of the required form", det.re, det.im)]
    DeterminantObstruction { det: Complex64 },

    #[error("trace obstruction: trace {}{:+}i is not zero", trace.re, trace.im)]
    TraceObstruction { trace: Complex64 },

    #[error("lower-right block is not invertible")]
    BlockNotInvertible,

    #[error("invalid block split: k = {k} for dimension {n}")]
    InvalidBlockSplit { n: usize, k: usize },

    #[error("similarity witness does not reproduce the target (residual {residual:.3e})")]
    WitnessMismatch { residual: f64 },

    #[error("predicted factor count {predicted} exceeds the budget of {max}")]
    BudgetExceeded { predicted: u64, max: u64 },

    #[error("need at least {required} points on the circle, got {got}")]
    InsufficientPoints { required: usize, got: usize },

    #[error("spectral projections are invalid: {0}")]
    InvalidProjections(String),

    #[error("diagonal block {block} is not zero")]
    NonZeroDiagonalBlock { block: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
