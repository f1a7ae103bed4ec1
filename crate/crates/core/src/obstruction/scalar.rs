//! Which scalars `λ·1_n` are limits of products of positive matrices.
//!
//! The determinant of such a product is real and positive, so `λⁿ = 1` is
//! necessary; the commutator pipeline shows it is sufficient. Off the group
//! the distance to the closed set `{X : det X ≥ 0}` is measured by a
//! derivative-free search over that set.

use std::f64::consts::{PI, TAU};
use std::thread;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorlab::{matrix_to_positive_factors, FactorizationSchedule};
use crate::matcore::ComplexMatrix;

/// `λⁿ` within this of 1 counts as an `n`-th root of unity.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub lambda: Complex64,
    pub n: usize,
    #[serde(rename = "bestDistance")]
    pub best_distance: f64,
    #[serde(rename = "inGroup")]
    pub in_group: bool,
    /// Largest schedule of the ladder.
    pub budget: FactorizationSchedule,
}

impl ObstructionReport {
    /// Phase of `λ` in turns, in `[0, 1)`.
    pub fn phase(&self) -> f64 {
        let t = (self.lambda.arg() / TAU).rem_euclid(1.0);
        if t >= 1.0 { 0.0 } else { t }
    }
}

/// (4,4), (8,8), (16,16), each capped at 10⁵ factors.
pub fn default_ladder() -> Vec<FactorizationSchedule> {
    [4, 8, 16].into_iter().map(|s| FactorizationSchedule::new(s, s)).collect()
}

pub fn is_root_of_unity(lambda: Complex64, n: usize) -> bool {
    (lambda.powu(n as u32) - 1.0).norm() <= ROOT_TOL
}

/// Exact distance from `λ·1_n` (`|λ| = 1`) to `{X : det X ∈ [0, ∞)}`.
///
/// Every eigenvalue of `X` lies within `r = ‖X − λ‖` of `λ`, so its argument
/// moves by at most `asin r`, and the `n` arguments must together cancel the
/// distance `δ` from `n·arg λ` to `2πℤ` unless some eigenvalue vanishes
/// (`r ≥ 1`). Hence `r ≥ sin(min(δ/n, π/2))`, attained by
/// `cos(δ/n)·e^{∓iδ/n}·λ·1`.
pub fn scalar_distance_lower_bound(lambda: Complex64, n: usize) -> f64 {
    let total = n as f64 * lambda.arg();
    let delta = (total - TAU * (total / TAU).round()).abs();
    (delta / n as f64).min(PI / 2.0).sin()
}

/// Rotates `y` by a scalar `n`-th root so its determinant becomes real and
/// nonnegative, choosing the branch closest to `target`.
fn retract(y: &ComplexMatrix, target: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let n = y.dim();
    let det = y.determinant();
    if det.norm() == 0.0 {
        return (y.clone(), y.distance(target));
    }
    let phase = det.arg();
    (0..n)
        .map(|k| {
            let x = y.scale(Complex64::from_polar(1.0, -(phase + TAU * k as f64) / n as f64));
            let d = x.distance(target);
            (x, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n ≥ 1")
}

/// Compass search for `min ‖X − target‖` over `det X ≥ 0`. Every iterate is
/// feasible, so the result is an upper bound on the true distance.
///
/// Directions are the `2n²` real and imaginary entry units plus `1` and
/// `i·1`; the step halves whenever no direction improves.
pub fn feasible_distance_search(target: &ComplexMatrix, starts: &[ComplexMatrix]) -> f64 {
    let n = target.dim();
    let mut directions = Vec::with_capacity(2 * n * n + 2);
    for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
        directions.push(ComplexMatrix::scalar(n, unit));
        for i in 0..n {
            for j in 0..n {
                let mut e = ComplexMatrix::zeros(n);
                e.set(i, j, unit);
                directions.push(e);
            }
        }
    }

    let mut best = f64::INFINITY;
    for start in starts {
        let (mut x, mut fx) = retract(start, target);
        let mut step = 0.25;
        let mut evals = 0usize;
        while step > 1e-9 && evals < 200_000 {
            let mut improved = false;
            for d in &directions {
                for sign in [1.0, -1.0] {
                    let (y, fy) = retract(&(&x + &d.scale_real(sign * step)), target);
                    evals += 1;
                    if fy < fx - 1e-15 {
                        x = y;
                        fx = fy;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(fx);
    }
    best
}

/// Distance from `λ·1_n` to products of positive matrices. On the group the
/// best pipeline error along the ladder is reported (rungs over budget are
/// skipped); off it, the feasible-set search from `λ·1`, `λ/2·1` and `0`.
pub fn scalar_obstruction_distance(
    lambda: Complex64,
    n: usize,
    ladder: &[FactorizationSchedule],
) -> Result<ObstructionReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("|λ| = {} is not 1", lambda.norm())));
    }
    let budget = *ladder
        .iter()
        .max_by_key(|s| (s.trotter_steps as u64) * (s.commutator_steps as u64).pow(2))
        .ok_or_else(|| Error::InvalidArgument("empty schedule ladder".into()))?;
    let target = ComplexMatrix::scalar(n, lambda);
    let in_group = is_root_of_unity(lambda, n);
    let best_distance = if in_group {
        let mut best = f64::INFINITY;
        for schedule in ladder {
            match matrix_to_positive_factors(&target, schedule) {
                Ok(f) => best = best.min(f.error),
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        best
    } else {
        let starts = [target.clone(), target.scale_real(0.5), ComplexMatrix::zeros(n)];
        feasible_distance_search(&target, &starts)
    };
    Ok(ObstructionReport { lambda, n, best_distance, in_group, budget })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEstimate {
    pub n: usize,
    pub epsilon: f64,
    pub reports: Vec<ObstructionReport>,
}

impl GroupEstimate {
    pub fn accepted(&self) -> Vec<&ObstructionReport> {
        self.reports.iter().filter(|r| r.best_distance < self.epsilon).collect()
    }

    /// The accepted set is exactly the sampled `n`-th roots of unity.
    pub fn matches_roots_of_unity(&self) -> bool {
        self.reports.iter().all(|r| (r.best_distance < self.epsilon) == r.in_group)
    }
}

/// Samples `λ = e^{2πik/grid}` and reports on each, sorted by phase. Grid
/// points run on separate threads.
pub fn estimate_group_g(
    n: usize,
    grid: usize,
    epsilon: f64,
    ladder: &[FactorizationSchedule],
) -> Result<GroupEstimate> {
    if grid < 4 * n {
        return Err(Error::InvalidArgument(format!("grid {grid} is below 4n = {}", 4 * n)));
    }
    let mut reports = thread::scope(|s| {
        let handles: Vec<_> = (0..grid)
            .map(|k| {
                s.spawn(move || {
                    let lambda = Complex64::from_polar(1.0, TAU * k as f64 / grid as f64);
                    scalar_obstruction_distance(lambda, n, ladder)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("grid worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    reports.sort_by(|a, b| a.phase().total_cmp(&b.phase()));
    Ok(GroupEstimate { n, epsilon, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_in_group_at_distance_zero() {
        let r = scalar_obstruction_distance(Complex64::new(1.0, 0.0), 3, &default_ladder()).unwrap();
        assert!(r.in_group);
        assert_eq!(r.best_distance, 0.0);
    }

    #[test]
    fn minus_one_in_m2() {
        let r = scalar_obstruction_distance(Complex64::new(-1.0, 0.0), 2, &default_ladder()).unwrap();
        assert!(r.in_group);
        assert!(r.best_distance <= 0.2, "{}", r.best_distance);
    }

    #[test]
    fn non_roots_in_m2_are_bounded_away() {
        // i² = −1 needs an eigenvalue at 0; e^{iπ/4} squares to i and is a quarter turn off.
        for (lambda, exact) in [
            (Complex64::new(0.0, 1.0), 1.0),
            (Complex64::from_polar(1.0, PI / 4.0), std::f64::consts::FRAC_1_SQRT_2),
        ] {
            let r = scalar_obstruction_distance(lambda, 2, &default_ladder()).unwrap();
            assert!(!r.in_group);
            assert!((scalar_distance_lower_bound(lambda, 2) - exact).abs() < 1e-12);
            assert!(r.best_distance >= exact - 1e-12);
            assert!(r.best_distance <= exact + 1e-3, "{} vs {}", r.best_distance, exact);
        }
    }

    #[test]
    fn n_one_accepts_only_one() {
        let est = estimate_group_g(1, 8, 0.25, &default_ladder()).unwrap();
        let accepted: Vec<_> = est.accepted().iter().map(|r| r.lambda).collect();
        assert_eq!(accepted, vec![Complex64::new(1.0, 0.0)]);
        assert!(est.matches_roots_of_unity());
    }

    #[test]
    fn grid_too_small() {
        assert!(estimate_group_g(3, 8, 0.25, &default_ladder()).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = scalar_obstruction_distance(Complex64::new(1.0, 0.0), 2, &default_ladder()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["lambda", "n", "bestDistance", "inGroup", "budget"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["lambda"], serde_json::json!([1.0, 0.0]));
    }
}
