//! `equivalence`: ratio sweep r(f) = ||g_1 f||_{l^p(w)} / ||f||_{l^p(w)}
//! over the ensemble, per (p, weight, params). A_p weights must show a
//! bounded, stable spread; non-A_p weights only get their trend recorded.
//! The exact case p = 2, w = 1 reproduces ratio^2 = Gamma(2)/4 = 1/4.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use jacobi_lps::gfunction::{gk_heat, BkSpace};
use jacobi_lps::quadrature::SpectralModel;
use jacobi_lps::sequence::FiniteSequence;
use jacobi_lps::weights::{ap_constant_with, weighted_norm, ApThresholds};

use super::RunContext;
use crate::config::{EnsembleConfig, WeightSpec};
use crate::report::Verdict;
use crate::rng::ensemble;
use crate::CliError;

#[derive(Debug, Serialize)]
struct SpreadRecord {
    alpha: f64,
    beta: f64,
    p: f64,
    weight: String,
    ap_verdict: String,
    support_max: usize,
    r_min: f64,
    r_max: f64,
    spread: f64,
}

#[derive(Debug, Serialize)]
struct ExactCase {
    alpha: f64,
    beta: f64,
    seq_index: usize,
    ratio_sq: f64,
    rel_error: f64,
}

pub fn run(ctx: &RunContext<'_>) -> Result<(serde_json::Value, Vec<Verdict>), CliError> {
    let cfg = ctx.config;
    let k1 = BkSpace::new(1)?;
    let base = ctx
        .out_dir
        .parent()
        .unwrap_or_else(|| std::path::Path::new("."));

    // Weight list always includes the exact-case constant weight.
    let mut weight_specs: Vec<WeightSpec> = vec![WeightSpec::Constant { value: 1.0 }];
    weight_specs.extend(cfg.weights.iter().cloned());

    let support_levels = [cfg.ensemble.support_max, 2 * cfg.ensemble.support_max];
    let mut records: Vec<SpreadRecord> = Vec::new();
    let mut exact_cases: Vec<ExactCase> = Vec::new();

    for params in cfg.jacobi_params() {
        for &support_max in &support_levels {
            let ens_cfg = EnsembleConfig {
                support_max,
                ..cfg.ensemble.clone()
            };
            let seqs = ensemble(&ens_cfg);
            let model = SpectralModel::build(params, cfg.model_size(support_max))?;

            // g_1 sequences once per f; reused across every (p, w).
            let g_seqs: Result<Vec<FiniteSequence>, jacobi_lps::Error> = seqs
                .par_iter()
                .map(|f| {
                    Ok(FiniteSequence::new(
                        (0..model.len())
                            .map(|n| gk_heat(&model, f, n, k1).map(|g| g.value))
                            .collect::<Result<Vec<f64>, _>>()?,
                    ))
                })
                .collect();
            let g_seqs = g_seqs?;

            for spec in &weight_specs {
                let weight = spec.build(base)?;
                for &p in &cfg.p_list {
                    let ap = ap_constant_with(
                        &weight,
                        p,
                        1024,
                        ApThresholds {
                            stabilize_rel: cfg.tolerances.ap_stabilize_rel,
                            growth_rel: cfg.tolerances.ap_growth_rel,
                        },
                    )?;
                    let mut r_min = f64::MAX;
                    let mut r_max = f64::MIN;
                    for (i, (f, gf)) in seqs.iter().zip(&g_seqs).enumerate() {
                        let r = weighted_norm(gf, &weight, p)? / weighted_norm(f, &weight, p)?;
                        r_min = r_min.min(r);
                        r_max = r_max.max(r);
                        if p == 2.0
                            && matches!(spec, WeightSpec::Constant { value } if *value == 1.0)
                            && support_max == cfg.ensemble.support_max
                        {
                            exact_cases.push(ExactCase {
                                alpha: params.alpha(),
                                beta: params.beta(),
                                seq_index: i,
                                ratio_sq: r * r,
                                rel_error: (r * r - 0.25).abs() / 0.25,
                            });
                        }
                    }
                    records.push(SpreadRecord {
                        alpha: params.alpha(),
                        beta: params.beta(),
                        p,
                        weight: spec.label(),
                        ap_verdict: format!("{:?}", ap.verdict),
                        support_max,
                        r_min,
                        r_max,
                        spread: r_max / r_min,
                    });
                }
            }
        }
    }

    // Verdicts: spread bound and stability for weights the classifier did
    // not reject; trend-only for the rest.
    let mut verdicts = Vec::new();
    let exact_worst = exact_cases
        .iter()
        .map(|c| c.rel_error)
        .fold(0.0_f64, f64::max);
    if !exact_cases.is_empty() {
        verdicts.push(Verdict::le(
            "exact case p=2 w=1: |ratio^2 - 1/4| / (1/4)",
            exact_worst,
            cfg.tolerances.identity_rel,
        ));
    }
    let base_support = cfg.ensemble.support_max;
    for rec in &records {
        if rec.support_max != base_support || rec.ap_verdict == "NonMember" {
            continue;
        }
        verdicts.push(Verdict::le(
            format!(
                "spread (a={}, b={}, p={}, w={})",
                rec.alpha, rec.beta, rec.p, rec.weight
            ),
            rec.spread,
            cfg.tolerances.spread_max,
        ));
        // Stability under support doubling.
        if let Some(doubled) = records.iter().find(|r| {
            r.alpha == rec.alpha
                && r.beta == rec.beta
                && r.p == rec.p
                && r.weight == rec.weight
                && r.support_max == 2 * base_support
        }) {
            verdicts.push(Verdict::le(
                format!(
                    "spread growth (a={}, b={}, p={}, w={})",
                    rec.alpha, rec.beta, rec.p, rec.weight
                ),
                doubled.spread / rec.spread - 1.0,
                cfg.tolerances.spread_growth,
            ));
        }
    }

    Ok((
        json!({ "spreads": records, "exact_cases": exact_cases }),
        verdicts,
    ))
}
