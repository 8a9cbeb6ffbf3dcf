//! Structured experiment reports. One JSON document per run (stable field
//! order, deterministic for a fixed config and seed except the `run_meta`
//! block) plus CSV side files per grid.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

/// One named check with its threshold; `pass` drives the process exit code.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub threshold: f64,
    /// "<=", ">=", "in" (window), or "finite"
    pub relation: String,
}

impl Verdict {
    pub fn le(name: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: observed <= threshold,
            observed,
            threshold,
            relation: "<=".into(),
        }
    }

    pub fn window(name: impl Into<String>, observed: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            pass: (lo..=hi).contains(&observed),
            observed,
            threshold: lo,
            relation: format!("in [{lo}, {hi}]"),
        }
    }

    pub fn finite(name: impl Into<String>, observed: f64) -> Self {
        Self {
            name: name.into(),
            pass: observed.is_finite(),
            observed,
            threshold: f64::INFINITY,
            relation: "finite".into(),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            observed: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
            relation: "flag".into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    /// theorem-hypothesis flag per parameter pair (reporting only)
    pub theorem_scope: Vec<ScopeNote>,
    /// per-case records; shape depends on the experiment
    pub cases: Value,
    pub verdicts: Vec<Verdict>,
    pub summary: Summary,
    pub run_meta: RunMeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScopeNote {
    pub alpha: f64,
    pub beta: f64,
    pub in_scope: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total_verdicts: usize,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub version: String,
    pub timestamp_unix: u64,
    pub runtime_ms: u64,
    pub threads: usize,
    pub seed: u64,
}

impl ExperimentReport {
    pub fn assemble(
        experiment: &str,
        config: &ExperimentConfig,
        cases: Value,
        verdicts: Vec<Verdict>,
        runtime_ms: u64,
        threads: usize,
    ) -> Self {
        let failures = verdicts.iter().filter(|v| !v.pass).count();
        let theorem_scope = config
            .jacobi_params()
            .iter()
            .map(|p| ScopeNote {
                alpha: p.alpha(),
                beta: p.beta(),
                in_scope: p.theorem_scope(),
            })
            .collect();
        ExperimentReport {
            experiment: experiment.to_string(),
            config: config.clone(),
            theorem_scope,
            cases,
            summary: Summary {
                total_verdicts: verdicts.len(),
                failures,
                pass: failures == 0,
            },
            verdicts,
            run_meta: RunMeta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                runtime_ms,
                threads,
                seed: config.ensemble.seed,
            },
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("create {}: {e}", dir.display())))?;
        let path = dir.join(format!("{}_report.json", self.experiment));
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("serialize report: {e}")))?;
        fs::write(&path, json.as_bytes())
            .map_err(|e| CliError::Io(format!("write {}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Write a CSV side file with a header row.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut out = fs::File::create(&path)
        .map_err(|e| CliError::Io(format!("create {}: {e}", path.display())))?;
    writeln!(out, "{header}").map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        writeln!(out, "{row}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(path)
}
