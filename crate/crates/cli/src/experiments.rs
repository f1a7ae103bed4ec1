//! The experiment runners behind each subcommand.
//!
//! Randomness comes from `ChaCha8Rng` seeded with the configured seed; each
//! independent row (a sweep input, a density ε) draws from its own stream,
//! `set_stream(row)`, so rows do not depend on each other's consumption.

use std::time::Instant;

use anyhow::{bail, ensure, Result};
use num_complex::Complex64;
use posfactor::matcore::approximate_invertible;
use posfactor::obstruction::{
    det_nonneg_check, estimate_group_g, unitary_product_trace_identity, DeterminantCheck, ObstructionReport,
    TraceIdentityRecord,
};
use posfactor::factorlab::{arc_resolution, eps_dense_correction};
use posfactor::{
    commutator_exp_factors, matrix_to_positive_factors, sample, trotter_factors, ComplexMatrix, FactorizationAudit,
    FactorizationSchedule, PositiveFactorization,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{float, Emit, Table};

/// Factor count quoted for `M_n` in the literature; reported, never asserted.
pub const LANDMARK_FACTOR_COUNT: usize = 11;

/// Errors at or below this are rounding noise; order fits are skipped.
pub const ERROR_FLOOR: f64 = 1e-10;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Least-squares slope of `log error` against `log n`, negated.
pub fn fitted_order(steps: &[u32], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|&n| f64::from(n).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -cov / var
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub dimension: usize,
    pub seed: u64,
    pub steps: Vec<u32>,
    /// Use commuting inputs, for which both products are exact.
    pub commuting: bool,
    /// Record wall time per row (makes output nondeterministic).
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(dimension: usize, seed: u64) -> Self {
        Self { dimension, seed, steps: vec![4, 8, 16, 32, 64], commuting: false, timing: false }
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.dimension >= 1, "dimension must be positive");
        ensure!(self.steps.len() >= 2, "a sweep needs at least two step counts");
        ensure!(self.steps.iter().all(|&s| s >= 1), "step counts must be positive");
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub n: u32,
    pub error: f64,
    pub factors: u64,
    pub predicted: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub kind: String,
    pub dimension: usize,
    pub seed: u64,
    pub commuting: bool,
    pub rows: Vec<SweepRow>,
    /// `None` when every error is at the rounding floor.
    pub order: Option<f64>,
    pub order_skipped: bool,
}

impl Emit for SweepReport {
    fn table(&self) -> Table {
        let timed = self.rows.iter().any(|r| r.wall_ms.is_some());
        let mut header = vec!["n", "error", "factors", "predicted"];
        if timed {
            header.push("wall_ms");
        }
        let mut t = Table::new(&header);
        for r in &self.rows {
            let mut row = vec![r.n.to_string(), float(r.error), r.factors.to_string(), r.predicted.to_string()];
            if timed {
                row.push(float(r.wall_ms.unwrap_or(f64::NAN)));
            }
            t.push(row);
        }
        t
    }
}

impl SweepReport {
    pub fn summary(&self) -> String {
        match self.order {
            Some(o) => format!("{} sweep: fitted order {o:.4}", self.kind),
            None => format!("{} sweep: all errors at the {ERROR_FLOOR:e} floor, order fit skipped", self.kind),
        }
    }
}

/// Unit-norm inputs for a sweep. With `commuting`, `b` is a polynomial in `a`.
fn sweep_inputs(config: &SweepConfig, general_a: bool) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = stream_rng(config.seed, 0);
    let n = config.dimension;
    if config.commuting {
        let h = sample::hermitian(&mut rng, n);
        let a = sample::unit_norm(&h);
        let b = sample::unit_norm(&(&(&h * &h) + &h));
        return (a, b);
    }
    let a = if general_a { sample::gaussian(&mut rng, n) } else { sample::hermitian(&mut rng, n) };
    (sample::unit_norm(&a), sample::unit_norm(&sample::hermitian(&mut rng, n)))
}

fn finish_sweep(kind: &str, config: &SweepConfig, rows: Vec<SweepRow>) -> SweepReport {
    let order_skipped = rows.iter().all(|r| r.error <= ERROR_FLOOR);
    let order = if order_skipped {
        None
    } else {
        let steps: Vec<u32> = rows.iter().map(|r| r.n).collect();
        let errors: Vec<f64> = rows.iter().map(|r| r.error.max(f64::MIN_POSITIVE)).collect();
        Some(fitted_order(&steps, &errors))
    };
    SweepReport {
        kind: kind.into(),
        dimension: config.dimension,
        seed: config.seed,
        commuting: config.commuting,
        rows,
        order,
        order_skipped,
    }
}

/// Error of `(exp(a/n)·exp(b/n))ⁿ` against `exp(a + b)` for Hermitian `a, b`.
pub fn run_trotter_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let (a, b) = sweep_inputs(config, false);
    let target = posfactor::matrix_exp(&(&a + &b));
    let mut rows = Vec::with_capacity(config.steps.len());
    for &n in &config.steps {
        let start = Instant::now();
        let factors = trotter_factors(&a, &b, n)?;
        let error = target.distance(&ComplexMatrix::product(config.dimension, &factors));
        let wall_ms = config.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
        rows.push(SweepRow { n, error, factors: factors.len() as u64, predicted: 2 * u64::from(n), wall_ms });
    }
    Ok(finish_sweep("trotter", config, rows))
}

/// Error of the `3n²` positive factors of the group-commutator product
/// against `exp([a, b])`, with `a` general and `b` Hermitian.
pub fn run_commutator_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let (a, b) = sweep_inputs(config, true);
    let mut rows = Vec::with_capacity(config.steps.len());
    for &n in &config.steps {
        let start = Instant::now();
        let f = commutator_exp_factors(&a, &b, n)?;
        let wall_ms = config.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
        let n64 = u64::from(n);
        rows.push(SweepRow { n, error: f.error, factors: f.factor_count() as u64, predicted: 3 * n64 * n64, wall_ms });
    }
    Ok(finish_sweep("commutator", config, rows))
}

#[derive(Debug, Clone)]
pub struct ObstructionConfig {
    pub dimension: usize,
    pub grid: usize,
    pub epsilon: f64,
    pub ladder: Vec<FactorizationSchedule>,
    /// Lift the `n ≤ 4` guard.
    pub force: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeReport {
    pub n: usize,
    pub grid: usize,
    pub epsilon: f64,
    pub reports: Vec<ObstructionReport>,
}

impl LandscapeReport {
    /// Indices `k` (λ = e^{2πik/grid}) with `bestDistance < ε`.
    pub fn accepted(&self) -> Vec<usize> {
        self.reports
            .iter()
            .enumerate()
            .filter(|(_, r)| r.best_distance < self.epsilon)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn matches_roots_of_unity(&self) -> bool {
        self.reports.iter().all(|r| (r.best_distance < self.epsilon) == r.in_group)
    }
}

impl Emit for LandscapeReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "k", "phase", "re", "im", "n", "bestDistance", "inGroup", "accepted", "trotter", "commutator", "maxFactors",
        ]);
        for (k, r) in self.reports.iter().enumerate() {
            t.push(vec![
                k.to_string(),
                float(r.phase()),
                float(r.lambda.re),
                float(r.lambda.im),
                r.n.to_string(),
                float(r.best_distance),
                r.in_group.to_string(),
                (r.best_distance < self.epsilon).to_string(),
                r.budget.trotter_steps.to_string(),
                r.budget.commutator_steps.to_string(),
                r.budget.max_factors.to_string(),
            ]);
        }
        t
    }
}

pub fn run_obstruction_landscape(config: &ObstructionConfig) -> Result<LandscapeReport> {
    ensure!(config.dimension >= 1, "dimension must be positive");
    if config.dimension > 4 && !config.force {
        bail!("n = {} exceeds the desk-scale limit of 4; pass --force to run anyway", config.dimension);
    }
    ensure!(config.epsilon > 0.0, "acceptance ε must be positive");
    let estimate = estimate_group_g(config.dimension, config.grid, config.epsilon, &config.ladder)?;
    Ok(LandscapeReport { n: config.dimension, grid: config.grid, epsilon: config.epsilon, reports: estimate.reports })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityRow {
    pub epsilon: f64,
    pub m: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Largest distance from the `ε/10` grid to the corrected points.
    pub gap: f64,
    pub product_defect: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub seed: u64,
    pub rows: Vec<DensityRow>,
}

impl Emit for DensityReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["epsilon", "m", "N", "gap", "productDefect", "pass"]);
        for r in &self.rows {
            t.push(vec![
                float(r.epsilon),
                r.m.to_string(),
                r.big_n.to_string(),
                float(r.gap),
                float(r.product_defect),
                r.pass.to_string(),
            ]);
        }
        t
    }
}

impl DensityReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// For each ε: `N` seeded random points, corrected, then brute-scanned.
pub fn run_density_check(eps: &[f64], seed: u64) -> Result<DensityReport> {
    ensure!(!eps.is_empty(), "no ε values given");
    let mut rows = Vec::with_capacity(eps.len());
    for (i, &e) in eps.iter().enumerate() {
        ensure!(e > 0.0 && e <= 2.0, "ε = {e} is outside (0, 2]");
        let (m, big_n) = arc_resolution(e)?;
        let points = sample::unit_circle_points(&mut stream_rng(seed, i as u64), big_n);
        let c = eps_dense_correction(&points, e)?;
        let gap = c.density_gap(e / 10.0);
        let product_defect = c.product_defect();
        rows.push(DensityRow { epsilon: e, m, big_n, gap, product_defect, pass: gap < e && product_defect <= 1e-12 });
    }
    Ok(DensityReport { seed, rows })
}

/// Every obstruction invariant of a factorization, recomputed.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub audit: FactorizationAudit,
    pub audit_passed: bool,
    pub determinant_check: DeterminantCheck,
    /// Present when the target is unitary.
    pub trace_identity: Option<TraceIdentityRecord>,
    pub passed: bool,
}

impl Emit for Verification {
    fn table(&self) -> Table {
        let mut t = Table::new(&["check", "value", "passed"]);
        t.push(vec!["factorCount".into(), self.audit.factor_count.to_string(), "true".into()]);
        t.push(vec!["recomputedError".into(), float(self.audit.recomputed_error), self.audit_passed.to_string()]);
        t.push(vec!["minEigenvalue".into(), float(self.audit.min_eigenvalue), (self.audit.min_eigenvalue > 0.0).to_string()]);
        t.push(vec![
            "determinantRe".into(),
            float(self.determinant_check.determinant.re),
            self.determinant_check.passed.to_string(),
        ]);
        t.push(vec![
            "determinantIm".into(),
            float(self.determinant_check.determinant.im),
            self.determinant_check.passed.to_string(),
        ]);
        if let Some(rec) = &self.trace_identity {
            t.push(vec!["logTraceSum".into(), float(rec.log_trace_sum), rec.holds.to_string()]);
        }
        t.push(vec!["all".into(), String::new(), self.passed.to_string()]);
        t
    }
}

/// Audit, determinant sign and, for unitary targets, the trace identity with
/// `δ = err·(2 + err)`, which bounds `‖P*P − 1‖` when `‖P − U‖ ≤ err`.
pub fn verify(f: &PositiveFactorization) -> Result<Verification> {
    ensure!(!f.factors.is_empty(), "factorization has no factors");
    let audit = f.audit();
    let audit_passed = audit.passes();
    let determinant_check = det_nonneg_check(&f.factors)?;
    let trace_identity = if f.target.unitary_defect() <= 1e-10 {
        let delta = f.error * (2.0 + f.error) + 1e-12;
        Some(unitary_product_trace_identity(&f.factors, delta)?)
    } else {
        None
    };
    let passed = audit_passed && determinant_check.passed && trace_identity.as_ref().is_none_or(|r| r.holds);
    Ok(Verification { audit, audit_passed, determinant_check, trace_identity, passed })
}

#[derive(Debug, Clone)]
pub struct FactorConfig {
    pub schedule: FactorizationSchedule,
    /// Replace a singular target by a nearby invertible one (this far away)
    /// and rotate a bad determinant onto the positive axis.
    pub perturb: Option<f64>,
    pub verify: bool,
    pub benchmark: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Perturbation {
    pub original: ComplexMatrix,
    /// `‖perturbed − original‖`.
    pub distance: f64,
    pub steps: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Benchmark {
    pub factor_count: usize,
    pub landmark: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorOutcome {
    pub factorization: PositiveFactorization,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<Benchmark>,
}

impl FactorOutcome {
    pub fn summary(&self) -> String {
        let f = &self.factorization;
        let mut s = format!(
            "method {}, {} factors, error {:.6e} at schedule ({},{})",
            f.method,
            f.factor_count(),
            f.error,
            f.schedule.trotter_steps,
            f.schedule.commutator_steps
        );
        if let Some(p) = &self.perturbation {
            s.push_str(&format!("; target perturbed by {:.6e} ({})", p.distance, p.steps.join(", ")));
        }
        if let Some(v) = &self.verification {
            s.push_str(if v.passed { "; verification passed" } else { "; verification FAILED" });
        }
        if let Some(b) = &self.benchmark {
            s.push_str(&format!("; {}× the landmark of {} factors", float(b.ratio), b.landmark));
        }
        s
    }
}

impl Emit for FactorOutcome {
    fn table(&self) -> Table {
        let f = &self.factorization;
        let mut t = Table::new(&["n", "method", "trotter", "commutator", "factors", "error", "perturbation", "verified"]);
        t.push(vec![
            f.dim().to_string(),
            f.method.clone(),
            f.schedule.trotter_steps.to_string(),
            f.schedule.commutator_steps.to_string(),
            f.factor_count().to_string(),
            float(f.error),
            self.perturbation.as_ref().map_or_else(|| float(0.0), |p| float(p.distance)),
            self.verification.as_ref().map_or_else(String::new, |v| v.passed.to_string()),
        ]);
        t
    }
}

fn perturb_target(x: &ComplexMatrix, eps: f64) -> Result<(ComplexMatrix, Perturbation)> {
    let n = x.dim();
    let mut steps = Vec::new();
    let mut y = x.clone();
    let tol = posfactor::tolerances();
    if y.smallest_singular_value() <= tol.singular * y.norm().max(f64::MIN_POSITIVE) {
        y = approximate_invertible(&y, eps)?;
        steps.push("invertible".to_string());
    }
    let det = y.determinant();
    if det.re <= 0.0 || det.im.abs() > tol.det_real * det.norm() {
        y = y.scale(Complex64::from_polar(1.0, -det.arg() / n as f64));
        steps.push("determinant-rotation".to_string());
    }
    let distance = y.distance(x);
    Ok((y, Perturbation { original: x.clone(), distance, steps }))
}

pub fn run_factor(target: &ComplexMatrix, config: &FactorConfig) -> Result<FactorOutcome> {
    let (x, perturbation) = match config.perturb {
        Some(eps) => {
            let (y, p) = perturb_target(target, eps)?;
            (y, (!p.steps.is_empty()).then_some(p))
        }
        None => (target.clone(), None),
    };
    let factorization = matrix_to_positive_factors(&x, &config.schedule)?;
    let verification = if config.verify { Some(verify(&factorization)?) } else { None };
    let benchmark = config.benchmark.then(|| Benchmark {
        factor_count: factorization.factor_count(),
        landmark: LANDMARK_FACTOR_COUNT,
        ratio: factorization.factor_count() as f64 / LANDMARK_FACTOR_COUNT as f64,
    });
    Ok(FactorOutcome { factorization, perturbation, verification, benchmark })
}
