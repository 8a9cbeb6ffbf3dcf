//! Re-derivation of summary verdicts from the per-case records of a report:
//! every number in `verdicts` must be recomputable from `cases`. Exit 1 on
//! any mismatch keeps reports honest.

use serde_json::Value;

use jacobi_lps::numerics::fit::fit_loglog;

use crate::CliError;

#[derive(Debug)]
pub struct RecheckOutcome {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

fn fmax(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::MIN, f64::max)
}

fn field(v: &Value, name: &str) -> Result<f64, CliError> {
    v.get(name)
        .and_then(Value::as_f64)
        .ok_or_else(|| CliError::Io(format!("report misses numeric field {name:?}")))
}

fn array<'v>(v: &'v Value, name: &str) -> Result<&'v Vec<Value>, CliError> {
    v.get(name)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Io(format!("report misses array {name:?}")))
}

fn floats(v: &Value, name: &str) -> Result<Vec<f64>, CliError> {
    Ok(array(v, name)?
        .iter()
        .filter_map(Value::as_f64)
        .collect())
}

fn max_of(cases: &Value, list: &str, fieldname: &str) -> Result<f64, CliError> {
    let rows = array(cases, list)?;
    let mut out = f64::MIN;
    for r in rows {
        out = out.max(field(r, fieldname)?);
    }
    Ok(out)
}

/// Recompute `observed` for a verdict by name; `None` when the verdict is
/// not derivable from this experiment's records (unknown name).
fn rederive(experiment: &str, name: &str, cases: &Value) -> Result<Option<f64>, CliError> {
    let v = match (experiment, name) {
        ("identity", "l2 identity max relative error") => {
            Some(max_of(cases, "ratios", "rel_error")?)
        }
        ("identity", "poisson domination max excess over sqrt(2) g_1") => {
            Some(max_of(cases, "domination", "max_excess")?)
        }
        ("kernels", "chebyshev oracle max abs error") => {
            Some(max_of(cases, "oracle", "max_abs_error")?)
        }
        ("kernels", "semigroup law max abs error") => {
            Some(max_of(cases, "semigroup_law", "max_abs_error")?)
        }
        ("kernels", "subordination vs direct max abs error") => {
            Some(max_of(cases, "subordination", "max_abs_error")?)
        }
        ("decay", "size slope") => {
            let xs: Vec<f64> = floats(cases, "separations")?;
            let ys = floats(cases, "size_norms")?;
            Some(fit_loglog(&xs, &ys).map_err(CliError::Numerical)?.slope)
        }
        ("decay", "smoothness slope") => {
            let xs: Vec<f64> = floats(cases, "separations")?;
            let ys = floats(cases, "diff_norms")?;
            Some(fit_loglog(&xs, &ys).map_err(CliError::Numerical)?.slope)
        }
        ("decay", "diagonal B1 norm max") => Some(fmax(floats(cases, "diagonal")?)),
        ("multiplier", "two-path max abs diff") => {
            Some(max_of(cases, "two_path", "max_abs_diff")?)
        }
        ("multiplier", "imaginary-power isometry max rel error") => {
            Some(max_of(cases, "isometry", "max_rel_error")?)
        }
        ("multiplier", "g1(T_M f)/g2(f) max ratio") => {
            Some(max_of(cases, "bound_sweep", "max_ratio")?)
        }
        ("apweight", "power-weight misclassifications (hard-checked grid)") => {
            let rows = array(cases, "classifications")?;
            let bad = rows
                .iter()
                .filter(|r| {
                    r["hard_checked"].as_bool() == Some(true)
                        && r["consistent"].as_bool() == Some(false)
                })
                .count();
            Some(bad as f64)
        }
        ("decay", other) if other.ends_with(" band") => {
            let rows = array(cases, "scaling_bands")?;
            let term = other.trim_end_matches(" band");
            rows.iter()
                .find(|r| r["term"].as_str() == Some(term))
                .map(|r| -> Result<f64, CliError> {
                    let vals = floats(r, "normalized")?;
                    let max = fmax(vals.iter().copied());
                    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
                    Ok(max / min)
                })
                .transpose()?
        }
        ("equivalence", other) => {
            if other.starts_with("exact case") {
                Some(max_of(cases, "exact_cases", "rel_error")?)
            } else if let Some(rest) = other.strip_prefix("spread growth (") {
                let key = rest.strip_suffix(')').unwrap_or(rest);
                let (base, doubled) = spread_pair(cases, key)?;
                Some(doubled / base - 1.0)
            } else if let Some(rest) = other.strip_prefix("spread (") {
                let key = rest.strip_suffix(')').unwrap_or(rest);
                Some(spread_pair(cases, key)?.0)
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(v)
}

/// (base-support spread, doubled-support spread) for a verdict key of the
/// form "a=.., b=.., p=.., w=..", recomputed from r_max / r_min.
fn spread_pair(cases: &Value, key: &str) -> Result<(f64, f64), CliError> {
    let parse = |tag: &str| -> Option<String> {
        key.split(", ")
            .find(|part| part.starts_with(tag))
            .map(|part| part[tag.len()..].to_string())
    };
    let bad = || CliError::Io(format!("bad spread key {key:?}"));
    let a: f64 = parse("a=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b: f64 = parse("b=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let p: f64 = parse("p=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let w = parse("w=").ok_or_else(bad)?;
    let rows = array(cases, "spreads")?;
    let mut matches: Vec<(usize, f64)> = Vec::new();
    for r in rows {
        if r["alpha"].as_f64() == Some(a)
            && r["beta"].as_f64() == Some(b)
            && r["p"].as_f64() == Some(p)
            && r["weight"].as_str() == Some(&w)
        {
            let support = r["support_max"].as_u64().unwrap_or(0) as usize;
            matches.push((support, field(r, "r_max")? / field(r, "r_min")?));
        }
    }
    matches.sort_by_key(|(s, _)| *s);
    match matches.as_slice() {
        [(_, base), (_, doubled), ..] => Ok((*base, *doubled)),
        [(_, base)] => Ok((*base, *base)),
        [] => Err(CliError::Io(format!("no spread records for key {key:?}"))),
    }
}

pub fn recheck_report(report: &Value) -> Result<RecheckOutcome, CliError> {
    let experiment = report["experiment"]
        .as_str()
        .ok_or_else(|| CliError::Io("report misses experiment name".into()))?;
    let cases = &report["cases"];
    let verdicts = report["verdicts"]
        .as_array()
        .ok_or_else(|| CliError::Io("report misses verdicts".into()))?;

    let mut mismatches = Vec::new();
    let mut checked = 0;
    for v in verdicts {
        let name = v["name"].as_str().unwrap_or("");
        let stored = field(v, "observed")?;
        match rederive(experiment, name, cases)? {
            Some(recomputed) => {
                checked += 1;
                // Values roundtrip exactly through JSON; the max/ratio
                // reductions reproduce them bit for bit.
                let agree = recomputed == stored
                    || (recomputed - stored).abs() <= 1e-12 * stored.abs().max(1e-300);
                if !agree {
                    mismatches.push(format!(
                        "{name}: stored {stored:e}, recomputed {recomputed:e}"
                    ));
                }
            }
            None => mismatches.push(format!("{name}: no re-derivation rule")),
        }
    }
    Ok(RecheckOutcome {
        checked,
        mismatches,
    })
}
