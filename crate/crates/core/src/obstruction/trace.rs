//! Traces on `M_n`, the de la Harpe–Skandalis residue of an exponential and
//! the vanishing of `Σ Tr log b_k` for positive factors of a unitary.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix};
use crate::tolerance::tolerances;

/// Residues this close to a lattice point are reported as zero.
const LATTICE_SNAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    /// `Tr`, with `K₀` image `ℤ`.
    Standard,
    /// `Tr / n`, with `K₀` image `(1/n)ℤ`.
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFunctional {
    pub kind: TraceKind,
    pub n: usize,
}

impl TraceFunctional {
    pub fn standard(n: usize) -> Self {
        Self { kind: TraceKind::Standard, n }
    }

    pub fn normalized(n: usize) -> Self {
        Self { kind: TraceKind::Normalized, n }
    }

    pub fn eval(&self, m: &ComplexMatrix) -> Result<Complex64> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.dim() });
        }
        Ok(match self.kind {
            TraceKind::Standard => m.trace(),
            TraceKind::Normalized => m.trace() / self.n as f64,
        })
    }

    /// Spacing of the image of `K₀(M_n)`: the trace of a projection is its
    /// rank, or its rank over `n`.
    pub fn lattice_spacing(&self) -> f64 {
        match self.kind {
            TraceKind::Standard => 1.0,
            TraceKind::Normalized => 1.0 / self.n as f64,
        }
    }

    /// `x` reduced into `[0, spacing)`.
    pub fn reduce(&self, x: f64) -> f64 {
        let spacing = self.lattice_spacing();
        let r = x.rem_euclid(spacing);
        if r < LATTICE_SNAP * spacing.max(1.0) || spacing - r < LATTICE_SNAP * spacing.max(1.0) {
            0.0
        } else {
            r
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantResidue {
    pub value: f64,
    pub lattice: f64,
    pub residue: f64,
}

/// `Δ(exp c) = τ(c)/(2πi)` modulo the trace lattice. For `c = 2πi·a` with `a`
/// Hermitian the value is `τ(a)`; in general the real part of `τ(c)/(2πi)` is
/// taken, the imaginary part being `−τ(Re-log)` which the lattice ignores.
pub fn dhs_residue_of_exponential(c: &ComplexMatrix, trace: TraceFunctional) -> Result<DeterminantResidue> {
    let value = (trace.eval(c)? / Complex64::new(0.0, TAU)).re;
    Ok(DeterminantResidue { value, lattice: trace.lattice_spacing(), residue: trace.reduce(value) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentityRecord {
    /// `Σ_k Tr log b_k`.
    pub log_trace_sum: f64,
    /// `det Π b_k`.
    pub determinant: Complex64,
    /// `‖P*P − 1‖` for the product `P`.
    pub unitary_defect: f64,
    /// Bound on `|s|` implied by the defect, plus rounding slack.
    pub bound: f64,
    pub holds: bool,
}

/// Checks that positive factors whose product is unitary within `delta` have
/// `Σ Tr log b_k ≈ 0`.
///
/// The singular values `σ` of the product satisfy `|σ² − 1| ≤ δ`, so
/// `|Σ log σ| ≤ −(n/2)·log(1 − δ)`; a slack proportional to `Σ |log λ|` over
/// all factor eigenvalues absorbs rounding in the logarithms.
pub fn unitary_product_trace_identity(factors: &[ComplexMatrix], delta: f64) -> Result<TraceIdentityRecord> {
    let first = factors.first().ok_or_else(|| Error::InvalidArgument("empty factor list".into()))?;
    let n = first.dim();
    let tol = tolerances();
    let mut log_trace_sum = 0.0;
    let mut log_mass = 0.0;
    for f in factors {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
        }
        if !f.is_hermitian(tol.hermitian) {
            return Err(Error::NotHermitian { deviation: f.hermitian_defect() });
        }
        let eig = hermitian_eig_unchecked(&f.hermitian_part());
        let min = eig.eigenvalues[0].re;
        if min <= 0.0 {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        for l in &eig.eigenvalues {
            let ln = l.re.ln();
            log_trace_sum += ln;
            log_mass += ln.abs();
        }
    }
    let product = ComplexMatrix::product(n, factors);
    let unitary_defect = product.unitary_defect();
    if unitary_defect > delta {
        return Err(Error::NotUnitary { defect: unitary_defect });
    }
    let defect_bound = if delta < 1.0 { -(n as f64 / 2.0) * (1.0 - delta).ln() } else { f64::INFINITY };
    let slack = 64.0 * f64::EPSILON * (log_mass + factors.len() as f64 * n as f64);
    let bound = defect_bound + slack;
    Ok(TraceIdentityRecord {
        log_trace_sum,
        determinant: product.determinant(),
        unitary_defect,
        bound,
        holds: log_trace_sum.abs() <= bound,
    })
}
