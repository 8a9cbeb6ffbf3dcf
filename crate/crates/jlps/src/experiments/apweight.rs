//! `apweight`: the A_p classification table for power weights around both
//! boundaries plus any configured weights, with window growth curves.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use jacobi_lps::weights::{ap_constant_with, ApThresholds, ApVerdict, DiscreteWeight};

use super::RunContext;
use crate::report::{write_csv, Verdict};
use crate::CliError;

#[derive(Debug, Serialize)]
struct ClassificationRecord {
    p: f64,
    weight: String,
    s: Option<f64>,
    analytic_inside: Option<bool>,
    near_boundary: bool,
    windows: Vec<usize>,
    constants: Vec<f64>,
    verdict: String,
    hard_checked: bool,
    consistent: bool,
}

pub fn run(ctx: &RunContext<'_>) -> Result<(serde_json::Value, Vec<Verdict>), CliError> {
    let cfg = ctx.config;
    let window = cfg.apweight.window_max;
    let margin = cfg.apweight.boundary_margin;
    let thresholds = ApThresholds {
        stabilize_rel: cfg.tolerances.ap_stabilize_rel,
        growth_rel: cfg.tolerances.ap_growth_rel,
    };
    let base = ctx
        .out_dir
        .parent()
        .unwrap_or_else(|| std::path::Path::new("."));

    // Power-weight grid per p, probing both boundaries s = -1 and s = p - 1.
    let mut jobs: Vec<(f64, Option<f64>, DiscreteWeight, String)> = Vec::new();
    for &p in &cfg.p_list {
        for s in [-0.9, -0.5, 0.0, 0.5, p - 1.1, p - 0.9, p, p + 1.0] {
            jobs.push((
                p,
                Some(s),
                DiscreteWeight::Power { s },
                format!("power({s})"),
            ));
        }
        for spec in &cfg.weights {
            jobs.push((p, None, spec.build(base)?, spec.label()));
        }
    }

    let records: Result<Vec<ClassificationRecord>, CliError> = jobs
        .par_iter()
        .map(|(p, s, weight, label)| {
            let rep = ap_constant_with(weight, *p, window, thresholds)
                .map_err(CliError::Numerical)?;
            let (analytic_inside, near_boundary) = match s {
                Some(s) => {
                    let inside = -1.0 < *s && *s < p - 1.0;
                    let near = (s - (p - 1.0)).abs() < margin || (s + 1.0).abs() < margin;
                    (Some(inside), near)
                }
                None => (None, false),
            };
            let hard_checked = analytic_inside.is_some() && !near_boundary;
            let consistent = match (analytic_inside, hard_checked) {
                (Some(inside), true) => {
                    if inside {
                        rep.verdict == ApVerdict::Member
                    } else {
                        rep.verdict != ApVerdict::Member
                    }
                }
                _ => true,
            };
            Ok(ClassificationRecord {
                p: *p,
                weight: label.clone(),
                s: *s,
                analytic_inside,
                near_boundary,
                windows: rep.windows,
                constants: rep.constant_by_window,
                verdict: format!("{:?}", rep.verdict),
                hard_checked,
                consistent,
            })
        })
        .collect();
    let records = records?;

    write_csv(
        ctx.out_dir,
        "apweight_growth.csv",
        "p,weight,window,constant,verdict",
        records.iter().flat_map(|r| {
            r.windows
                .iter()
                .zip(&r.constants)
                .map(|(w, c)| format!("{},{},{w},{c:.17e},{}", r.p, r.weight, r.verdict))
                .collect::<Vec<_>>()
        }),
    )?;

    let misclassified = records
        .iter()
        .filter(|r| r.hard_checked && !r.consistent)
        .count();
    let verdicts = vec![Verdict::le(
        "power-weight misclassifications (hard-checked grid)",
        misclassified as f64,
        0.0,
    )];

    Ok((
        json!({ "classifications": records, "growth_csv": "apweight_growth.csv" }),
        verdicts,
    ))
}
