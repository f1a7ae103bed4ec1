use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use posfactor::obstruction::default_ladder;
use posfactor::{sample, FactorizationSchedule, PositiveFactorization, Tolerances};
use posfactor_cli::experiments::{
    run_commutator_sweep, run_density_check, run_factor, run_obstruction_landscape, run_trotter_sweep, stream_rng,
    verify, FactorConfig, ObstructionConfig, SweepConfig,
};
use posfactor_cli::output::{write_output, Emit, Format};
use posfactor_cli::{exit_code, explain, target, VerificationFailed, EXIT_CONFIG};

/// Factor matrices into products of positive definite matrices and measure
/// the obstructions.
///
/// Tolerances can be overridden with POSFACTOR_TOL="key=value,..." (keys:
/// hermitian, reconstruction, singular, unitary, det_one, det_real, trace).
#[derive(Parser)]
#[command(name = "posfactor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct Shared {
    /// Matrix dimension.
    #[arg(long = "n", global = true)]
    n: Option<usize>,
    /// RNG seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// ε values, comma separated or repeated.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Schedule `T,C` (Trotter steps, commutator steps); repeat for a ladder.
    #[arg(long, global = true, value_parser = parse_schedule)]
    schedule: Vec<(u32, u32)>,
    /// Refuse schedules predicting more factors than this.
    #[arg(long, global = true, default_value_t = FactorizationSchedule::DEFAULT_MAX_FACTORS)]
    max_factors: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Re-multiply factors and check every obstruction invariant.
    #[arg(long, global = true)]
    verify: bool,
    /// Rotate a target with non-positive determinant by a scalar phase onto det > 0
    /// (after lifting a singular target to a nearby invertible one, --eps away).
    #[arg(long, global = true)]
    perturb: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Factor one target matrix.
    Factor {
        /// JSON target; a seeded random det-positive matrix of size --n when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Compare the factor count against the 11-factor landmark.
        #[arg(long)]
        benchmark: bool,
    },
    /// Error of the Trotter product against exp(a + b).
    SweepTrotter(SweepArgs),
    /// Error of the positive group-commutator product against exp([a, b]).
    SweepCommutator(SweepArgs),
    /// Distance of λ·1 to products of positives over a grid of λ.
    Obstruction {
        /// Number of λ samples on the circle (default 4n).
        #[arg(long)]
        grid: Option<usize>,
        /// Allow n > 4.
        #[arg(long)]
        force: bool,
    },
    /// ε-density of torus corrections.
    Density,
    /// Check a factorization JSON written by `factor`.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Step counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [4u32, 8, 16, 32, 64])]
    steps: Vec<u32>,
    /// Use commuting inputs (errors at rounding level, no order fit).
    #[arg(long)]
    commuting: bool,
    /// Add a wall-time column (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

fn parse_schedule(s: &str) -> std::result::Result<(u32, u32), String> {
    let (t, c) = s.split_once(',').ok_or_else(|| format!("expected T,C, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("bad step count `{v}`: {e}"));
    Ok((parse(t)?, parse(c)?))
}

impl Shared {
    fn schedules(&self) -> Vec<FactorizationSchedule> {
        self.schedule
            .iter()
            .map(|&(t, c)| FactorizationSchedule::new(t, c).with_max_factors(self.max_factors))
            .collect()
    }

    fn emit(&self, value: &impl Emit, default: Format) -> Result<()> {
        write_output(&value.render(self.format.unwrap_or(default))?, self.out.as_deref())
    }
}

fn run(cli: Cli) -> Result<()> {
    Tolerances::from_env().context("POSFACTOR_TOL")?;
    let shared = &cli.shared;
    match cli.command {
        Command::Factor { input, benchmark } => {
            let x = match input {
                Some(path) => target::read_target(&path)?,
                None => sample::det_positive(&mut stream_rng(shared.seed, 0), shared.n.unwrap_or(2), 10.0),
            };
            let schedule = match shared.schedules().as_slice() {
                [] => FactorizationSchedule::new(16, 16).with_max_factors(shared.max_factors),
                [one] => *one,
                _ => bail!("factor takes a single --schedule"),
            };
            let perturb = shared.perturb.then(|| shared.eps.first().copied().unwrap_or(1e-3 * x.norm().max(1.0)));
            let outcome = run_factor(&x, &FactorConfig { schedule, perturb, verify: shared.verify, benchmark })?;
            eprintln!("{}", outcome.summary());
            shared.emit(&outcome, Format::Json)?;
            if outcome.verification.as_ref().is_some_and(|v| !v.passed) {
                return Err(VerificationFailed.into());
            }
        }
        Command::SweepTrotter(args) => sweep(shared, args, false)?,
        Command::SweepCommutator(args) => sweep(shared, args, true)?,
        Command::Obstruction { grid, force } => {
            let n = shared.n.unwrap_or(2);
            let ladder = match shared.schedules() {
                l if l.is_empty() => default_ladder().into_iter().map(|s| s.with_max_factors(shared.max_factors)).collect(),
                l => l,
            };
            let config = ObstructionConfig {
                dimension: n,
                grid: grid.unwrap_or(4 * n),
                epsilon: shared.eps.first().copied().unwrap_or(0.25),
                ladder,
                force,
            };
            let report = run_obstruction_landscape(&config)?;
            eprintln!(
                "n = {}: {} of {} grid points accepted at ε = {}; matches n-th roots of unity: {}",
                report.n,
                report.accepted().len(),
                report.grid,
                report.epsilon,
                report.matches_roots_of_unity()
            );
            shared.emit(&report, Format::Csv)?;
        }
        Command::Density => {
            let eps = if shared.eps.is_empty() { vec![1.0, 0.5, 0.25] } else { shared.eps.clone() };
            let report = run_density_check(&eps, shared.seed)?;
            shared.emit(&report, Format::Csv)?;
        }
        Command::Verify { input } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
            // Accept both a bare factorization and the envelope written by `factor`.
            let inner = value.get("factorization").cloned().unwrap_or(value);
            let f: PositiveFactorization = serde_json::from_value(inner).context("not a factorization")?;
            let report = verify(&f)?;
            shared.emit(&report, Format::Json)?;
            if !report.passed {
                return Err(VerificationFailed.into());
            }
        }
    }
    Ok(())
}

fn sweep(shared: &Shared, args: SweepArgs, commutator: bool) -> Result<()> {
    let config = SweepConfig {
        dimension: shared.n.unwrap_or(2),
        seed: shared.seed,
        steps: args.steps,
        commuting: args.commuting,
        timing: args.timing,
    };
    let report = if commutator { run_commutator_sweep(&config)? } else { run_trotter_sweep(&config)? };
    eprintln!("{}", report.summary());
    shared.emit(&report, Format::Csv)
}

fn main() -> ExitCode {
    // clap's own failure status (2) is reserved for mathematical obstructions.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(why) = explain(&err) {
                eprintln!("note: {why}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
