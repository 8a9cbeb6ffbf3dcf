//! The six experiments. Each returns its per-case records (the JSON `cases`
//! block) and the list of hard verdicts; the runner adds timing, report
//! assembly, and file output.

pub mod apweight;
pub mod decay;
pub mod equivalence;
pub mod identity;
pub mod kernels;
pub mod multiplier;

use std::path::Path;
use std::time::Instant;

use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::report::{ExperimentReport, Verdict};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Identity,
    Kernels,
    Decay,
    Equivalence,
    Multiplier,
    Apweight,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Identity => "identity",
            Experiment::Kernels => "kernels",
            Experiment::Decay => "decay",
            Experiment::Equivalence => "equivalence",
            Experiment::Multiplier => "multiplier",
            Experiment::Apweight => "apweight",
        }
    }
}

/// Execution context: where side files go and how wide the pool is.
pub struct RunContext<'a> {
    pub config: &'a ExperimentConfig,
    pub out_dir: &'a Path,
    pub threads: usize,
}

pub fn run(
    experiment: Experiment,
    config: &ExperimentConfig,
    out_dir: &Path,
    threads: usize,
) -> Result<ExperimentReport, CliError> {
    if let Some(declared) = &config.experiment {
        if declared != experiment.name() {
            return Err(CliError::Config(format!(
                "config declares experiment {declared:?} but the {} subcommand was invoked",
                experiment.name()
            )));
        }
    }
    let ctx = RunContext {
        config,
        out_dir,
        threads,
    };
    let start = Instant::now();
    let (cases, verdicts): (Value, Vec<Verdict>) = match experiment {
        Experiment::Identity => identity::run(&ctx)?,
        Experiment::Kernels => kernels::run(&ctx)?,
        Experiment::Decay => decay::run(&ctx)?,
        Experiment::Equivalence => equivalence::run(&ctx)?,
        Experiment::Multiplier => multiplier::run(&ctx)?,
        Experiment::Apweight => apweight::run(&ctx)?,
    };
    let report = ExperimentReport::assemble(
        experiment.name(),
        config,
        cases,
        verdicts,
        start.elapsed().as_millis() as u64,
        threads,
    );
    report.write(out_dir)?;
    Ok(report)
}
