//! Experiment driver library behind the `jlps` binary: configuration,
//! reproducible ensembles, experiment implementations, and report emission.

pub mod config;
pub mod experiments;
pub mod recheck;
pub mod report;
pub mod rng;
pub mod svg;

use thiserror::Error;

/// Driver-level failures. Hard-assertion failures are not errors: they are
/// recorded as failed verdicts in the report and drive exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or arguments (exit code 2).
    #[error("config error: {0}")]
    Config(String),
    /// Internal numerical fault (exit code 3).
    #[error("numerical fault: {0}")]
    Numerical(#[from] jacobi_lps::Error),
    /// Filesystem/serialization fault (exit code 3).
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}
