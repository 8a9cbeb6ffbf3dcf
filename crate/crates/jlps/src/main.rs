use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jlps::config::ExperimentConfig;
use jlps::experiments::{self, Experiment};
use jlps::CliError;

/// Experiment driver for the discrete Jacobi Littlewood-Paley-Stein numerics.
///
/// Exit codes: 0 all hard assertions pass, 1 assertion failure,
/// 2 config error, 3 internal numerical fault.
#[derive(Parser)]
#[command(name = "jlps", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Ensemble seed (overrides the config's `ensemble.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for the case pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact l2 identities of the heat/Poisson square functions.
    Identity,
    /// Chebyshev kernel oracle, semigroup law, subordination.
    Kernels,
    /// Kernel-norm decay slopes and Schlafli scaling bands.
    Decay,
    /// Weighted norm-equivalence ratio sweep.
    Equivalence,
    /// Laplace-type multiplier checks.
    Multiplier,
    /// Muckenhoupt A_p weight classification.
    Apweight,
    /// Recompute a report's summary verdicts from its per-case records.
    Recheck {
        /// Path to a *_report.json written by another subcommand.
        #[arg(long)]
        report: PathBuf,
    },
}

impl Command {
    fn experiment(&self) -> Option<Experiment> {
        match self {
            Command::Identity => Some(Experiment::Identity),
            Command::Kernels => Some(Experiment::Kernels),
            Command::Decay => Some(Experiment::Decay),
            Command::Equivalence => Some(Experiment::Equivalence),
            Command::Multiplier => Some(Experiment::Multiplier),
            Command::Apweight => Some(Experiment::Apweight),
            Command::Recheck { .. } => None,
        }
    }
}

fn run_recheck(path: &std::path::Path) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read report {}: {e}", path.display())))?;
    let report: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("report parse: {e}")))?;
    let outcome = jlps::recheck::recheck_report(&report)?;
    for m in &outcome.mismatches {
        println!("[MISMATCH] {m}");
    }
    println!(
        "recheck: {}/{} verdicts re-derived from per-case records",
        outcome.checked - outcome.mismatches.len(),
        outcome.checked.max(outcome.mismatches.len())
    );
    Ok(outcome.mismatches.is_empty())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Command::Recheck { report } = &cli.command {
        return run_recheck(report);
    }
    let config_path = cli
        .config
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut config = ExperimentConfig::load(&config_path)?;
    if let Some(seed) = cli.seed {
        config.ensemble.seed = seed;
    }
    if let Some(out) = cli.out {
        config.output.dir = out;
    }
    let threads = cli.threads.unwrap_or_else(num_threads);
    if threads == 0 {
        return Err(CliError::Config("--threads must be >= 1".into()));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let experiment = cli.command.experiment().expect("run() handles recheck earlier");
    let out_dir = config.output.dir.clone();
    let report =
        pool.install(|| experiments::run(experiment, &config, &out_dir, threads))?;

    for v in &report.verdicts {
        println!(
            "[{}] {}: {:.6e} {} {:.6e}",
            if v.pass { "PASS" } else { "FAIL" },
            v.name,
            v.observed,
            v.relation,
            v.threshold
        );
    }
    println!(
        "{}: {}/{} checks passed, report in {}",
        report.experiment,
        report.summary.total_verdicts - report.summary.failures,
        report.summary.total_verdicts,
        out_dir.join(format!("{}_report.json", report.experiment)).display()
    );
    Ok(report.summary.pass)
}

fn num_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
