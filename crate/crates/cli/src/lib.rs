//! Reproducible experiments on positive factorizations: convergence sweeps,
//! obstruction landscapes, density checks and single factorization runs.

pub mod experiments;
pub mod output;
pub mod target;

use posfactor::Error;

/// Exit status for configuration and I/O failures.
pub const EXIT_CONFIG: u8 = 1;
/// Exit status when the mathematics forbids the request.
pub const EXIT_OBSTRUCTION: u8 = 2;

/// A verification that ran but did not pass.
#[derive(Debug)]
pub struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("factorization failed verification")
    }
}

impl std::error::Error for VerificationFailed {}

/// Maps an error chain to an exit status.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<VerificationFailed>() {
            return EXIT_OBSTRUCTION;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::DeterminantObstruction { .. }
                | Error::TraceObstruction { .. }
                | Error::NotInvertible { .. } => EXIT_OBSTRUCTION,
                _ => EXIT_CONFIG,
            };
        }
    }
    EXIT_CONFIG
}

/// Human explanation attached to mathematical failures.
pub fn explain(err: &anyhow::Error) -> Option<&'static str> {
    err.chain().find_map(|c| match c.downcast_ref::<Error>()? {
        Error::DeterminantObstruction { .. } => Some(
            "a product of positive definite matrices has real positive determinant; \
             pass --perturb to rotate the target onto det > 0",
        ),
        Error::NotInvertible { .. } => {
            Some("products of positive definite matrices are invertible; pass --perturb to move off the singular set")
        }
        _ => None,
    })
}
