//! Global numerical tolerances.
//!
//! All tolerances are measured in the operator (spectral) norm and are
//! relative to the norm of the input unless noted otherwise. The pack can be
//! overridden once per process through the `POSFACTOR_TOL` environment
//! variable, a comma-separated list of `key=value` pairs, e.g.
//! `POSFACTOR_TOL=reconstruction=1e-9,hermitian=1e-8`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "POSFACTOR_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative deviation from Hermitian symmetry accepted on input.
    pub hermitian: f64,
    /// Relative reconstruction error accepted for decompositions.
    pub reconstruction: f64,
    /// Relative floor below which a singular value or eigenvalue counts as zero.
    pub singular: f64,
    /// Absolute defect `‖u*u − 1‖` accepted for unitaries.
    pub unitary: f64,
    /// Absolute distance `|det u − 1|` accepted for special unitaries.
    pub det_one: f64,
    /// Relative imaginary residue accepted for determinants that must be real.
    pub det_real: f64,
    /// Relative trace accepted for traceless inputs.
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        reconstruction: 1e-10,
        singular: 1e-12,
        unitary: 1e-10,
        det_one: 1e-8,
        det_real: 1e-8,
        trace: 1e-10,
    };

    /// Parses an override string on top of the defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut tol = Self::DEFAULT;
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad tolerance value in `{item}`")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive: `{item}`")));
            }
            let slot = match key.trim() {
                "hermitian" => &mut tol.hermitian,
                "reconstruction" => &mut tol.reconstruction,
                "singular" => &mut tol.singular,
                "unitary" => &mut tol.unitary,
                "det_one" => &mut tol.det_one,
                "det_real" => &mut tol.det_real,
                "trace" => &mut tol.trace,
                other => return Err(Error::InvalidArgument(format!("unknown tolerance `{other}`"))),
            };
            *slot = value;
        }
        Ok(tol)
    }

    /// Reads `POSFACTOR_TOL`, falling back to the defaults when it is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Self::parse_overrides(&spec),
            Err(_) => Ok(Self::DEFAULT),
        }
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

/// The process-wide tolerance pack. Initialized from the environment on first
/// use; a malformed `POSFACTOR_TOL` falls back to the defaults (callers that
/// want to surface the parse error should call [`Tolerances::from_env`]).
pub fn tolerances() -> &'static Tolerances {
    GLOBAL.get_or_init(|| Tolerances::from_env().unwrap_or_default())
}
