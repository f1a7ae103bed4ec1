use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig_unchecked, ComplexMatrix};
use crate::tolerance::tolerances;

/// Accuracy knobs of the commutator pipeline.
///
/// `trotter_steps` splits `exp(Σ c_k)` into `(Π exp(c_k/T))^T`;
/// `commutator_steps` is the `n` of the group-commutator product, each of
/// whose `n²` repeated blocks contributes three positive factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationSchedule {
    #[serde(rename = "trotter")]
    pub trotter_steps: u32,
    #[serde(rename = "commutator")]
    pub commutator_steps: u32,
    #[serde(rename = "maxFactors")]
    pub max_factors: u64,
}

impl FactorizationSchedule {
    pub const DEFAULT_MAX_FACTORS: u64 = 100_000;

    pub fn new(trotter_steps: u32, commutator_steps: u32) -> Self {
        Self { trotter_steps, commutator_steps, max_factors: Self::DEFAULT_MAX_FACTORS }
    }

    pub fn with_max_factors(mut self, max_factors: u64) -> Self {
        self.max_factors = max_factors;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trotter_steps == 0 || self.commutator_steps == 0 {
            return Err(Error::InvalidArgument(format!(
                "schedule steps must be positive, got ({}, {})",
                self.trotter_steps, self.commutator_steps
            )));
        }
        Ok(())
    }

    /// Factors emitted by the commutator stage alone: `T · pairs · 3C²`.
    pub fn commutator_stage_count(&self, pairs: usize) -> u64 {
        let c = u64::from(self.commutator_steps);
        u64::from(self.trotter_steps) * pairs as u64 * 3 * c * c
    }

    /// `T · pairs · 3C² + 1`, the last factor being the positive polar part.
    pub fn predicted_factor_count(&self, pairs: usize) -> u64 {
        self.commutator_stage_count(pairs) + 1
    }

    pub fn check_budget(&self, pairs: usize) -> Result<()> {
        let predicted = self.predicted_factor_count(pairs);
        if predicted > self.max_factors {
            return Err(Error::BudgetExceeded { predicted, max: self.max_factors });
        }
        Ok(())
    }
}

/// A target matrix with an ordered list of positive definite factors whose
/// product approximates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveFactorization {
    pub target: ComplexMatrix,
    pub factors: Vec<ComplexMatrix>,
    /// `‖target − Π factors‖` in operator norm.
    pub error: f64,
    pub method: String,
    pub schedule: FactorizationSchedule,
}

impl PositiveFactorization {
    pub fn new(
        target: ComplexMatrix,
        factors: Vec<ComplexMatrix>,
        method: impl Into<String>,
        schedule: FactorizationSchedule,
    ) -> Self {
        assert!(factors.iter().all(|f| f.dim() == target.dim()), "factor dimension mismatch");
        let error = target.distance(&ComplexMatrix::product(target.dim(), &factors));
        Self { target, factors, error, method: method.into(), schedule }
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn product(&self) -> ComplexMatrix {
        ComplexMatrix::product(self.dim(), &self.factors)
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Recomputes every invariant of the factorization.
    pub fn audit(&self) -> FactorizationAudit {
        let mut max_hermitian_defect: f64 = 0.0;
        let mut min_eigenvalue = f64::INFINITY;
        for f in &self.factors {
            let scale = f.norm().max(f64::MIN_POSITIVE);
            max_hermitian_defect = max_hermitian_defect.max(f.hermitian_defect() / scale);
            let lowest = hermitian_eig_unchecked(&f.hermitian_part()).eigenvalues[0].re;
            min_eigenvalue = min_eigenvalue.min(lowest);
        }
        let product = self.product();
        let recomputed_error = self.target.distance(&product);
        let determinant = product.determinant();
        FactorizationAudit {
            factor_count: self.factors.len(),
            max_hermitian_defect,
            min_eigenvalue,
            recomputed_error,
            error_drift: (recomputed_error - self.error).abs(),
            determinant,
        }
    }

    pub fn verify(&self) -> Result<FactorizationAudit> {
        let audit = self.audit();
        audit.check()?;
        Ok(audit)
    }
}

/// Result of [`PositiveFactorization::audit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationAudit {
    pub factor_count: usize,
    /// Largest `‖f − f*‖ / ‖f‖` over the factors.
    pub max_hermitian_defect: f64,
    /// Smallest eigenvalue over all factors.
    pub min_eigenvalue: f64,
    pub recomputed_error: f64,
    /// `|recomputed − stored|`.
    pub error_drift: f64,
    pub determinant: Complex64,
}

impl FactorizationAudit {
    pub const ERROR_DRIFT_TOL: f64 = 1e-12;

    pub fn det_imaginary_residue(&self) -> f64 {
        let m = self.determinant.norm();
        if m == 0.0 { 0.0 } else { self.determinant.im.abs() / m }
    }

    pub fn check(&self) -> Result<()> {
        let tol = tolerances();
        if self.max_hermitian_defect > tol.hermitian {
            return Err(Error::NotHermitian { deviation: self.max_hermitian_defect });
        }
        if self.factor_count > 0 && self.min_eigenvalue <= 0.0 {
            return Err(Error::NotPositive { min_eigenvalue: self.min_eigenvalue });
        }
        if self.error_drift > Self::ERROR_DRIFT_TOL {
            return Err(Error::InvalidArgument(format!(
                "stored error disagrees with the recomputed error by {:.3e}",
                self.error_drift
            )));
        }
        if self.determinant.re <= 0.0 || self.det_imaginary_residue() > tol.det_real {
            return Err(Error::DeterminantObstruction { det: self.determinant });
        }
        Ok(())
    }

    pub fn passes(&self) -> bool {
        self.check().is_ok()
    }
}

/// Block-diagonal factorization of a direct sum. Shorter factor lists are
/// padded with identities; the error is the largest block error.
pub fn direct_sum_factorization(blocks: &[PositiveFactorization]) -> Result<PositiveFactorization> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("direct sum of zero blocks".into()));
    }
    if blocks.len() == 1 {
        return Ok(blocks[0].clone());
    }
    let len = blocks.iter().map(|b| b.factors.len()).max().unwrap_or(0);
    let factors = (0..len)
        .map(|i| {
            let parts: Vec<ComplexMatrix> = blocks
                .iter()
                .map(|b| b.factors.get(i).cloned().unwrap_or_else(|| ComplexMatrix::identity(b.dim())))
                .collect();
            ComplexMatrix::direct_sum(&parts)
        })
        .collect();
    let targets: Vec<ComplexMatrix> = blocks.iter().map(|b| b.target.clone()).collect();
    let schedule = FactorizationSchedule {
        trotter_steps: blocks.iter().map(|b| b.schedule.trotter_steps).max().unwrap_or(1),
        commutator_steps: blocks.iter().map(|b| b.schedule.commutator_steps).max().unwrap_or(1),
        max_factors: blocks.iter().map(|b| b.schedule.max_factors).max().unwrap_or(0),
    };
    Ok(PositiveFactorization::new(ComplexMatrix::direct_sum(&targets), factors, "direct-sum", schedule))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(target: ComplexMatrix, factors: Vec<ComplexMatrix>) -> PositiveFactorization {
        PositiveFactorization::new(target, factors, "test", FactorizationSchedule::new(1, 1))
    }

    #[test]
    fn predicted_count_formula() {
        let s = FactorizationSchedule::new(16, 16);
        assert_eq!(s.predicted_factor_count(1), 16 * 3 * 256 + 1);
        assert_eq!(s.commutator_stage_count(2), 2 * 16 * 3 * 256);
        assert!(s.with_max_factors(100).check_budget(1).is_err());
        assert!(FactorizationSchedule::new(0, 3).validate().is_err());
    }

    #[test]
    fn schedule_json_names() {
        let json = serde_json::to_string(&FactorizationSchedule::new(8, 4)).unwrap();
        assert_eq!(json, r#"{"trotter":8,"commutator":4,"maxFactors":100000}"#);
    }

    #[test]
    fn audit_flags_indefinite_factors() {
        let bad = single(ComplexMatrix::from_real_diagonal(&[1.0, -1.0]), vec![ComplexMatrix::from_real_diagonal(&[1.0, -1.0])]);
        assert!(matches!(bad.verify(), Err(Error::NotPositive { .. })));
        let good = single(ComplexMatrix::from_real_diagonal(&[1.0, 2.0]), vec![ComplexMatrix::from_real_diagonal(&[1.0, 2.0])]);
        let audit = good.verify().unwrap();
        assert_eq!(audit.recomputed_error, 0.0);
    }

    #[test]
    fn direct_sum_single_block_is_unchanged() {
        let b = single(ComplexMatrix::from_real_diagonal(&[2.0]), vec![ComplexMatrix::from_real_diagonal(&[2.0])]);
        assert_eq!(direct_sum_factorization(std::slice::from_ref(&b)).unwrap(), b);
        assert!(direct_sum_factorization(&[]).is_err());
    }

    #[test]
    fn direct_sum_of_positive_targets() {
        let p = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let q = ComplexMatrix::from_real_diagonal(&[3.0]);
        let sum = direct_sum_factorization(&[single(p.clone(), vec![p.clone()]), single(q.clone(), vec![q.clone()])]).unwrap();
        assert_eq!(sum.factor_count(), 1);
        assert_eq!(sum.error, 0.0);
        assert!(sum.verify().is_ok());
    }

    #[test]
    fn direct_sum_error_is_max_block_error() {
        // Block errors 0.5 and 0.25 (factor lists of different lengths).
        let a = single(ComplexMatrix::from_real_diagonal(&[1.5]), vec![ComplexMatrix::from_real_diagonal(&[1.0])]);
        let b = single(
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0]),
            vec![ComplexMatrix::from_real_diagonal(&[1.25, 1.0]), ComplexMatrix::identity(2)],
        );
        let sum = direct_sum_factorization(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(sum.factor_count(), 2);
        assert!((sum.error - a.error.max(b.error)).abs() < 1e-12);
        assert!((sum.error - 0.5).abs() < 1e-12);
    }
}
