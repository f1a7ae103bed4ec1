//! The acceptance suite. Each test prints one `PASS`/`FAIL` line (written
//! straight to stderr so it survives output capture) and then asserts.

use std::f64::consts::TAU;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use posfactor::factorlab::{arc_resolution, eps_dense_correction};
use posfactor::matcore::block_invertible_decomposition;
use posfactor::obstruction::scalar_distance_lower_bound;
use posfactor::{
    conjugate_positive_as_two, det_nonneg_check, finite_spectrum_adjust, hermitian_pair_split,
    matrix_to_positive_factors, polar_decompose, sample, unitary_product_trace_identity, zero_diagonal_commutators,
    Complex64, ComplexMatrix, FactorizationSchedule,
};
use posfactor_cli::experiments::{
    run_commutator_sweep, run_obstruction_landscape, run_trotter_sweep, stream_rng, ObstructionConfig, SweepConfig,
    LANDMARK_FACTOR_COUNT,
};
use rand::Rng;

fn report(name: &str, limit: Duration, start: Instant, outcome: Result<String, String>) {
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    };
    let line = match &outcome {
        Ok(detail) => format!("PASS {name}: {detail} [{elapsed:.2?}]"),
        Err(why) => format!("FAIL {name}: {why} [{elapsed:.2?}]"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(why) = outcome {
        panic!("{name}: {why}");
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

#[test]
fn ballantine_determinant_is_nonnegative() {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = stream_rng(101, 0);
        let mut worst: f64 = 0.0;
        for trial in 0..1000 {
            let n = 2 + trial % 3;
            let count = rng.random_range(1..=6);
            let factors = sample::positive_factors(&mut rng, n, count, 10.0);
            let c = det_nonneg_check(&factors).map_err(|e| e.to_string())?;
            let det = c.determinant;
            let residue = det.im.abs() / det.norm();
            worst = worst.max(residue);
            check(c.passed && det.re > 0.0 && residue <= 1e-8, || format!("trial {trial}: det = {det}"))?;
        }
        Ok(format!("1000 products, worst relative imaginary residue {worst:.2e}"))
    })();
    report("ballantine_determinant_is_nonnegative", Duration::from_secs(10), start, outcome);
}

#[test]
fn log_trace_vanishes_on_unitary_products() {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = stream_rng(102, 0);
        let mut worst: f64 = 0.0;
        for trial in 0..200 {
            let n = 2 + trial % 3;
            let count = rng.random_range(1..=5);
            let mut factors = sample::positive_factors(&mut rng, n, count, 10.0);
            // Close the list: p₁⋯p_k = U·Q, so appending Q⁻¹ leaves U.
            let polar = polar_decompose(&ComplexMatrix::product(n, &factors)).map_err(|e| e.to_string())?;
            factors.push(polar.positive.inverse().map_err(|e| e.to_string())?.hermitian_part());
            let rec = unitary_product_trace_identity(&factors, 1e-10).map_err(|e| e.to_string())?;
            worst = worst.max(rec.log_trace_sum.abs());
            check(rec.log_trace_sum.abs() <= 1e-8, || format!("trial {trial}: Σ Tr log = {:.3e}", rec.log_trace_sum))?;
        }
        Ok(format!("200 closed lists, worst |Σ Tr log b| {worst:.2e}"))
    })();
    report("log_trace_vanishes_on_unitary_products", Duration::from_secs(10), start, outcome);
}

#[test]
fn product_formulas_converge_at_first_order() {
    let start = Instant::now();
    let outcome = (|| {
        let mut orders = Vec::new();
        for (dim, seed) in [(2, 7), (4, 8)] {
            let config = SweepConfig::new(dim, seed);
            for report in [run_trotter_sweep(&config), run_commutator_sweep(&config)] {
                let report = report.map_err(|e| e.to_string())?;
                let order = report.order.ok_or("order fit skipped")?;
                check((0.9..=1.1).contains(&order), || format!("{} {dim}×{dim}: order {order:.4}", report.kind))?;
                check(report.rows.iter().all(|r| r.factors == r.predicted), || "factor count mismatch".into())?;
                orders.push(format!("{} {dim}×{dim} {order:.3}", report.kind));
            }
        }
        Ok(format!("orders: {}", orders.join(", ")))
    })();
    report("product_formulas_converge_at_first_order", Duration::from_secs(30), start, outcome);
}

#[test]
fn exact_identities_reconstruct() {
    let start = Instant::now();
    let outcome = (|| {
        let rel = |a: &ComplexMatrix, b: &ComplexMatrix| a.distance(b) / b.norm().max(f64::MIN_POSITIVE);
        let mut rng = stream_rng(104, 0);
        let mut worst = [0.0f64; 4];
        for trial in 0..500 {
            let n = 2 + trial % 5;

            let k = 1 + trial % 3;
            let blocks = 2 + trial % 2;
            let dim = k * blocks;
            let g = sample::gaussian(&mut rng, dim);
            let a = ComplexMatrix::from_fn(dim, |i, j| if i / k == j / k { Complex64::new(0.0, 0.0) } else { g.get(i, j) });
            let d = zero_diagonal_commutators(&a, k).map_err(|e| e.to_string())?;
            worst[0] = worst[0].max(rel(&d.commutator_sum(dim), &a));

            let x = sample::gaussian(&mut rng, n);
            let y = sample::gaussian(&mut rng, n);
            let d = hermitian_pair_split(&x, &y).map_err(|e| e.to_string())?;
            worst[1] = worst[1].max(rel(&d.commutator_sum(n), &x.commutator(&y)));

            let m = sample::gaussian(&mut rng, n);
            let f = block_invertible_decomposition(&m, 1 + trial % (n - 1)).map_err(|e| e.to_string())?;
            worst[2] = worst[2].max(rel(&f.reconstruct(), &m));

            let v = sample::det_positive(&mut rng, n, 10.0);
            let p = sample::positive_definite(&mut rng, n, 10.0);
            let f = conjugate_positive_as_two(&v, &p).map_err(|e| e.to_string())?;
            worst[3] = worst[3].max(f.error / f.target.norm());
        }
        let names = ["zero-diagonal", "pair split", "block", "two-positive"];
        for (name, w) in names.iter().zip(worst) {
            check(w <= 1e-10, || format!("{name}: relative residual {w:.3e}"))?;
        }
        Ok(format!(
            "500 instances each, worst relative residuals {}",
            names.iter().zip(worst).map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", ")
        ))
    })();
    report("exact_identities_reconstruct", Duration::from_secs(10), start, outcome);
}

#[test]
fn torus_corrections_are_dense() {
    let start = Instant::now();
    let outcome = (|| {
        // Independent m-scan: 2·sin(π/m) < ε/2 ⇔ m > π / asin(ε/4).
        let oracle = |eps: f64| ((std::f64::consts::PI / (eps / 4.0).asin()).floor() as usize + 1).max(2);
        check(oracle(0.5) == 26, || format!("oracle gives m = {}", oracle(0.5)))?;
        let resolved = arc_resolution(0.5).map_err(|e| e.to_string())?;
        check(resolved == (26, 676), || format!("(m, N) = {resolved:?}"))?;
        let mut summary = Vec::new();
        for (i, eps) in [1.0, 0.5, 0.25].into_iter().enumerate() {
            let (m, big_n) = arc_resolution(eps).map_err(|e| e.to_string())?;
            check(m == oracle(eps), || format!("ε = {eps}: m = {m}, oracle {}", oracle(eps)))?;
            let points = sample::unit_circle_points(&mut stream_rng(105, i as u64), big_n);
            let c = eps_dense_correction(&points, eps).map_err(|e| e.to_string())?;
            let gap = c.density_gap(eps / 10.0);
            check(gap < eps, || format!("ε = {eps}: gap {gap}"))?;
            check(c.product_defect() <= 1e-12, || format!("ε = {eps}: |Πμ − 1| = {:.3e}", c.product_defect()))?;
            summary.push(format!("ε={eps} (m,N)=({m},{big_n}) gap {gap:.3}"));
        }
        Ok(summary.join("; "))
    })();
    report("torus_corrections_are_dense", Duration::from_secs(5), start, outcome);
}

#[test]
fn finite_spectrum_adjustment_is_bounded() {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = stream_rng(106, 0);
        let mut worst_slack = f64::INFINITY;
        for trial in 0..200 {
            let n = 1 + trial % 8;
            let blocks = rng.random_range(1..=n);
            let (w, groups) = sample::finite_spectrum_unitary(&mut rng, n, blocks);
            let adj = finite_spectrum_adjust(&w, &groups).map_err(|e| e.to_string())?;
            let (dist, bound) = (adj.distance(), adj.bound());
            check(dist <= bound + 1e-12, || format!("trial {trial}: {dist} > {bound}"))?;
            worst_slack = worst_slack.min(bound - dist);
            for det in adj.block_determinants() {
                check((det - 1.0).norm() <= 1e-10, || format!("trial {trial}: block det {det}"))?;
            }
        }
        Ok(format!("200 unitaries, smallest slack to 2π/min N {worst_slack:.3e}"))
    })();
    report("finite_spectrum_adjustment_is_bounded", Duration::from_secs(10), start, outcome);
}

#[test]
fn scalar_group_has_n_elements() {
    let start = Instant::now();
    let outcome = (|| {
        let eps = 0.25;
        let mut summary = Vec::new();
        for (n, grid) in [(2usize, 8usize), (3, 12)] {
            let config = ObstructionConfig {
                dimension: n,
                grid,
                epsilon: eps,
                ladder: vec![FactorizationSchedule::new(16, 16)],
                force: false,
            };
            let landscape = run_obstruction_landscape(&config).map_err(|e| e.to_string())?;
            let accepted = landscape.accepted();
            let roots: Vec<usize> = (0..grid).filter(|k| (k * n) % grid == 0).collect();
            check(accepted == roots, || format!("n = {n}: accepted {accepted:?}, expected {roots:?}"))?;
            // Threshold sanity: group elements well below ε, others bounded away
            // by the analytic distance, which is at least 2ε on these grids.
            let mut inside: f64 = 0.0;
            let mut outside = f64::INFINITY;
            for (k, r) in landscape.reports.iter().enumerate() {
                let lambda = Complex64::from_polar(1.0, TAU * k as f64 / grid as f64);
                if r.in_group {
                    inside = inside.max(r.best_distance);
                } else {
                    let floor = scalar_distance_lower_bound(lambda, n);
                    check(r.best_distance >= floor - 1e-12, || format!("n = {n}, k = {k}: below analytic floor"))?;
                    outside = outside.min(r.best_distance);
                }
            }
            summary.push(format!("n={n}: {} accepted, max in-group {inside:.1e}, min off-group {outside:.3}", accepted.len()));
        }
        Ok(summary.join("; "))
    })();
    report("scalar_group_has_n_elements", Duration::from_secs(120), start, outcome);
}

#[test]
fn end_to_end_factorization() {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = stream_rng(108, 0);
        let mut worst: f64 = 0.0;
        let mut counts = Vec::new();
        for trial in 0..50 {
            let n = 2 + trial % 2;
            let x = sample::det_positive(&mut rng, n, 10.0);
            let run = |s: u32| matrix_to_positive_factors(&x, &FactorizationSchedule::new(s, s)).map_err(|e| e.to_string());
            let (coarse, mid, fine) = (run(8)?, run(16)?, run(32)?);
            check(mid.error <= 0.1, || format!("trial {trial}: error {} at (16,16)", mid.error))?;
            check(fine.error <= coarse.error, || format!("trial {trial}: {} at (32,32) > {} at (8,8)", fine.error, coarse.error))?;
            worst = worst.max(mid.error);
            counts.push(mid.factor_count());
        }
        counts.sort_unstable();
        counts.dedup();
        Ok(format!(
            "50 targets, worst (16,16) error {worst:.3e}; factor counts at (16,16) {counts:?} vs landmark {LANDMARK_FACTOR_COUNT}"
        ))
    })();
    report("end_to_end_factorization", Duration::from_secs(120), start, outcome);
}

#[test]
fn cli_output_is_deterministic() {
    let start = Instant::now();
    let outcome = (|| {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let fact = dir.path().join("f.json");
        let fact_arg = fact.to_str().unwrap().to_string();
        let runs: Vec<Vec<String>> = vec![
            vec!["factor", "--n", "3", "--seed", "9", "--schedule", "4,4", "--verify", "--benchmark"],
            vec!["factor", "--n", "2", "--seed", "9", "--schedule", "4,4", "--format", "csv"],
            vec!["sweep-trotter", "--n", "3", "--seed", "5"],
            vec!["sweep-commutator", "--n", "2", "--seed", "5", "--steps", "4,8,16", "--format", "json"],
            vec!["obstruction", "--n", "2", "--schedule", "4,4", "--schedule", "8,8"],
            vec!["density", "--seed", "3", "--eps", "1.0,0.5"],
            vec!["verify", "--input", &fact_arg],
        ]
        .into_iter()
        .map(|r| r.into_iter().map(String::from).collect())
        .collect();
        // Something for `verify` to read.
        let status = Command::new(env!("CARGO_BIN_EXE_posfactor"))
            .args(["factor", "--n", "2", "--schedule", "4,4", "--out", &fact_arg])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        check(status.success(), || "could not write factorization".into())?;
        for args in &runs {
            let once = || Command::new(env!("CARGO_BIN_EXE_posfactor")).args(args).output();
            let (a, b) = (once().map_err(|e| e.to_string())?, once().map_err(|e| e.to_string())?);
            check(a.status.success(), || format!("`{}` failed: {}", args.join(" "), String::from_utf8_lossy(&a.stderr)))?;
            check(!a.stdout.is_empty(), || format!("`{}` printed nothing", args.join(" ")))?;
            check(a.stdout == b.stdout, || format!("`{}` differs between runs", args.join(" ")))?;
        }
        Ok(format!("{} invocations byte-identical across two runs", runs.len()))
    })();
    report("cli_output_is_deterministic", Duration::from_secs(120), start, outcome);
}
