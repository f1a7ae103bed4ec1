//! Nudging the eigenvalues of a finite-spectrum unitary to roots of unity of
//! the right order, so that each spectral block has determinant one.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::factorization::{direct_sum_factorization, FactorizationSchedule, PositiveFactorization};
use super::pipeline::unitary_to_positive_factors;
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix, SpectralDecomposition};

const PROJECTION_TOL: f64 = 1e-10;
/// `N·θ` closer than this to an integer is treated as an exact root.
const ROOT_SNAP: f64 = 1e-9;

/// Distinct eigenvalues with their spectral projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGroups {
    pub values: Vec<Complex64>,
    pub projections: Vec<ComplexMatrix>,
}

impl SpectralGroups {
    /// Groups eigenvalues closer than `tol` and sums `v·v*` over each group.
    pub fn from_decomposition(decomp: &SpectralDecomposition, tol: f64) -> Self {
        let n = decomp.eigenvectors.dim();
        let mut values: Vec<Complex64> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (k, &z) in decomp.eigenvalues.iter().enumerate() {
            match values.iter().position(|v| (v - z).norm() < tol) {
                Some(g) => members[g].push(k),
                None => {
                    values.push(z);
                    members.push(vec![k]);
                }
            }
        }
        let u = &decomp.eigenvectors;
        let projections = members
            .iter()
            .map(|cols| ComplexMatrix::from_fn(n, |i, j| cols.iter().map(|&c| u.get(i, c) * u.get(j, c).conj()).sum()))
            .collect();
        Self { values, projections }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.projections.iter().map(|p| p.trace().re.round() as usize).collect()
    }

    /// `Σ λ_j·p_j`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.projections[0].dim();
        self.values
            .iter()
            .zip(&self.projections)
            .fold(ComplexMatrix::zeros(n), |acc, (&z, p)| &acc + &p.scale(z))
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProjections(msg));
        if self.values.is_empty() || self.values.len() != self.projections.len() {
            return bad("need one projection per eigenvalue".into());
        }
        let mut total = ComplexMatrix::zeros(n);
        for (j, p) in self.projections.iter().enumerate() {
            if p.dim() != n {
                return bad(format!("projection {j} has dimension {}", p.dim()));
            }
            if p.hermitian_defect() > PROJECTION_TOL || (&(p * p) - p).norm() > PROJECTION_TOL {
                return bad(format!("projection {j} is not an orthogonal projection"));
            }
            if p.trace().re.round() < 1.0 {
                return bad(format!("projection {j} has rank zero"));
            }
            for (k, q) in self.projections.iter().enumerate().skip(j + 1) {
                if (p * q).norm() > PROJECTION_TOL {
                    return bad(format!("projections {j} and {k} are not orthogonal"));
                }
            }
            total = &total + p;
        }
        if total.distance(&ComplexMatrix::identity(n)) > PROJECTION_TOL {
            return bad("projections do not sum to the identity".into());
        }
        if let Some(z) = self.values.iter().find(|z| (z.norm() - 1.0).abs() > PROJECTION_TOL) {
            return bad(format!("eigenvalue {z} is not unimodular"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSpectrumAdjustment {
    pub eigenvalues: Vec<Complex64>,
    pub ranks: Vec<usize>,
    /// Least `α_j ≥ 0` with `(e^{2πiα_j}·λ_j)^{N_j} = 1`.
    pub alphas: Vec<f64>,
    /// `e^{2πiα_j}·λ_j`, each an exact `N_j`-th root of unity.
    pub adjusted_eigenvalues: Vec<Complex64>,
    pub original: ComplexMatrix,
    pub adjusted: ComplexMatrix,
}

impl FiniteSpectrumAdjustment {
    /// `‖adjusted − original‖`.
    pub fn distance(&self) -> f64 {
        self.adjusted.distance(&self.original)
    }

    /// `2π / min_j N_j`.
    pub fn bound(&self) -> f64 {
        TAU / *self.ranks.iter().min().expect("at least one block") as f64
    }

    /// Determinant of each adjusted block, `μ_j^{N_j}`.
    pub fn block_determinants(&self) -> Vec<Complex64> {
        self.adjusted_eigenvalues.iter().zip(&self.ranks).map(|(mu, &r)| mu.powu(r as u32)).collect()
    }
}

/// Moves each eigenvalue `λ_j = e^{2πiθ_j}` of `w` forward to the nearest
/// `N_j`-th root of unity, `N_j` the rank of its spectral projection.
pub fn finite_spectrum_adjust(w: &ComplexMatrix, groups: &SpectralGroups) -> Result<FiniteSpectrumAdjustment> {
    let n = w.dim();
    groups.validate(n)?;
    let defect = w.unitary_defect();
    if defect > PROJECTION_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let mismatch = groups.reconstruct().distance(w);
    if mismatch > PROJECTION_TOL * w.norm() {
        return Err(Error::InvalidProjections(format!("declared spectrum misses w by {mismatch:.3e}")));
    }

    let ranks = groups.ranks();
    let mut alphas = Vec::with_capacity(ranks.len());
    let mut adjusted_eigenvalues = Vec::with_capacity(ranks.len());
    for (&lambda, &rank) in groups.values.iter().zip(&ranks) {
        let theta = (lambda.arg() / TAU).rem_euclid(1.0);
        let scaled = rank as f64 * theta;
        let (k, alpha) = if (scaled - scaled.round()).abs() <= ROOT_SNAP {
            (scaled.round(), 0.0)
        } else {
            let k = scaled.ceil();
            (k, (k - scaled) / rank as f64)
        };
        let k = (k as usize) % rank;
        alphas.push(alpha);
        adjusted_eigenvalues.push(Complex64::from_polar(1.0, TAU * k as f64 / rank as f64));
    }
    let adjusted = adjusted_eigenvalues
        .iter()
        .zip(&groups.projections)
        .fold(ComplexMatrix::zeros(n), |acc, (&mu, p)| &acc + &p.scale(mu));
    Ok(FiniteSpectrumAdjustment {
        eigenvalues: groups.values.clone(),
        ranks,
        alphas,
        adjusted_eigenvalues,
        original: w.clone(),
        adjusted,
    })
}

/// Factors the adjusted unitary block by block: in an orthonormal basis
/// adapted to the projections it is `⊕ μ_j·1_{N_j}` with every block of
/// determinant one, each factored by the commutator pipeline; the direct sum
/// is conjugated back.
pub fn factor_adjusted_blocks(
    adjustment: &FiniteSpectrumAdjustment,
    groups: &SpectralGroups,
    schedule: &FactorizationSchedule,
) -> Result<PositiveFactorization> {
    let n = adjustment.adjusted.dim();
    let mut basis = DMatrix::<Complex64>::zeros(n, n);
    let mut col = 0;
    let mut blocks = Vec::with_capacity(groups.projections.len());
    for ((p, &rank), &mu) in groups.projections.iter().zip(&adjustment.ranks).zip(&adjustment.adjusted_eigenvalues) {
        let eig = hermitian_eig_unchecked(p);
        // Eigenvalues ascend, so the range of p is spanned by the last `rank` vectors.
        for k in (n - rank)..n {
            basis.set_column(col, &eig.eigenvectors.as_nalgebra().column(k));
            col += 1;
        }
        blocks.push(unitary_to_positive_factors(&ComplexMatrix::scalar(rank, mu), schedule)?);
    }
    let w = ComplexMatrix::from_nalgebra(basis);
    let sum = direct_sum_factorization(&blocks)?;
    let factors = sum.factors.iter().map(|f| f.conjugate_by(&w).hermitian_part()).collect();
    Ok(PositiveFactorization::new(adjustment.adjusted.clone(), factors, "finite-spectrum", sum.schedule))
}
