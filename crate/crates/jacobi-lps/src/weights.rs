//! Discrete weights on N, weighted l^p norms, and Muckenhoupt A_p
//! diagnostics.
//!
//! A_p membership is an asymptotic property; a finite sweep can only
//! indicate it. The classifier computes the bracketed sup over windows
//! [n, m] with m capped at a doubling ladder of sizes and decides by
//! explicit growth thresholds: stabilization (< 1% growth across the last
//! two doublings) reads as membership, sustained growth (> 10% per doubling
//! across three doublings) as non-membership, anything else is
//! inconclusive.

use crate::error::{Error, Result};
use crate::sequence::FiniteSequence;

/// A strictly positive weight sequence, accessible at any index (tabulated
/// weights error beyond their range instead of guessing an extension).
#[derive(Debug, Clone)]
pub enum DiscreteWeight {
    Constant(f64),
    /// w(n) = (n + 1)^s.
    Power { s: f64 },
    Tabulated(Vec<f64>),
}

impl DiscreteWeight {
    pub fn one() -> Self {
        DiscreteWeight::Constant(1.0)
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        match self {
            DiscreteWeight::Constant(c) => Ok(*c),
            DiscreteWeight::Power { s } => Ok(((n + 1) as f64).powf(*s)),
            DiscreteWeight::Tabulated(v) => {
                v.get(n).copied().ok_or(Error::WeightTableTooShort {
                    len: v.len(),
                    needed: n,
                })
            }
        }
    }

    /// Validate positivity up to `n_max` (tabulated weights can carry bad
    /// entries from a file).
    pub fn validate(&self, n_max: usize) -> Result<()> {
        match self {
            DiscreteWeight::Constant(c) => {
                if *c > 0.0 && c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("constant weight must be > 0, got {c}")))
                }
            }
            DiscreteWeight::Power { s } => {
                if s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain("power weight exponent must be finite".into()))
                }
            }
            DiscreteWeight::Tabulated(v) => {
                if v.len() <= n_max {
                    return Err(Error::WeightTableTooShort {
                        len: v.len(),
                        needed: n_max,
                    });
                }
                for (n, &w) in v.iter().enumerate().take(n_max + 1) {
                    if !(w > 0.0) || !w.is_finite() {
                        return Err(Error::Domain(format!(
                            "weight table entry w({n}) = {w} is not strictly positive"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApVerdict {
    Member,
    NonMember,
    Inconclusive,
}

/// Classifier thresholds; the defaults are the stabilization/growth rates
/// described above, exposed for configuration.
#[derive(Debug, Clone, Copy)]
pub struct ApThresholds {
    /// relative growth below which the constant counts as stabilized
    pub stabilize_rel: f64,
    /// relative growth per doubling above which it counts as growing
    pub growth_rel: f64,
}

impl Default for ApThresholds {
    fn default() -> Self {
        Self {
            stabilize_rel: 0.01,
            growth_rel: 0.10,
        }
    }
}

/// A_p sweep outcome: the bracketed sup restricted to windows [n, m] with
/// m < window for each ladder window, plus the verdict.
#[derive(Debug, Clone)]
pub struct ApReport {
    pub p: f64,
    pub window_max: usize,
    pub windows: Vec<usize>,
    pub constant_by_window: Vec<f64>,
    pub verdict: ApVerdict,
}

/// Compute sup over 0 <= n <= m <= window of
/// (m - n + 1)^{-p} (sum w) (sum w^{-1/(p-1)})^{p-1}
/// with prefix sums, for windows on the doubling ladder ending at
/// `window_max`.
pub fn ap_constant(w: &DiscreteWeight, p: f64, window_max: usize) -> Result<ApReport> {
    ap_constant_with(w, p, window_max, ApThresholds::default())
}

pub fn ap_constant_with(
    w: &DiscreteWeight,
    p: f64,
    window_max: usize,
    thresholds: ApThresholds,
) -> Result<ApReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent {
            p,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    if window_max == 0 {
        return Err(Error::Domain("window_max must be >= 1".into()));
    }
    w.validate(window_max)?;

    // Doubling ladder: window_max, /2, /4, /8 (dropping anything < 8).
    let mut windows: Vec<usize> = (0..4)
        .map(|i| window_max >> i)
        .filter(|&v| v >= 8)
        .collect();
    windows.reverse();
    if windows.is_empty() {
        windows.push(window_max);
    }

    // Prefix sums of w and w^{-1/(p-1)}.
    let dual = -1.0 / (p - 1.0);
    let mut pw = Vec::with_capacity(window_max + 2);
    let mut pd = Vec::with_capacity(window_max + 2);
    pw.push(0.0);
    pd.push(0.0);
    for n in 0..=window_max {
        let v = w.value(n)?;
        pw.push(pw[n] + v);
        pd.push(pd[n] + v.powf(dual));
    }

    let mut constant_by_window = vec![0.0_f64; windows.len()];
    for n in 0..=window_max {
        for m in n..=window_max {
            let len = (m - n + 1) as f64;
            let bracket =
                (pw[m + 1] - pw[n]) * (pd[m + 1] - pd[n]).powf(p - 1.0) / len.powf(p);
            for (wi, &cap) in windows.iter().enumerate() {
                if m <= cap && bracket > constant_by_window[wi] {
                    constant_by_window[wi] = bracket;
                }
            }
        }
    }

    let verdict = classify(&constant_by_window, thresholds);
    Ok(ApReport {
        p,
        window_max,
        windows,
        constant_by_window,
        verdict,
    })
}

fn classify(constants: &[f64], th: ApThresholds) -> ApVerdict {
    let growths: Vec<f64> = constants
        .windows(2)
        .map(|pair| (pair[1] - pair[0]) / pair[0].max(f64::MIN_POSITIVE))
        .collect();
    if growths.len() >= 2 && growths[growths.len() - 2..].iter().all(|&g| g < th.stabilize_rel)
    {
        return ApVerdict::Member;
    }
    if growths.len() >= 3 && growths.iter().rev().take(3).all(|&g| g > th.growth_rel) {
        return ApVerdict::NonMember;
    }
    ApVerdict::Inconclusive
}

/// Weighted norm (sum |f(m)|^p w(m))^{1/p}, 1 <= p < inf.
pub fn weighted_norm(f: &FiniteSequence, w: &DiscreteWeight, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent {
            p,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let mut acc = crate::numerics::kahan::NeumaierSum::new();
    for (m, &v) in f.entries().iter().enumerate() {
        if v != 0.0 {
            acc.add(v.abs().powf(p) * w.value(m)?);
        }
    }
    Ok(acc.value().powf(1.0 / p))
}

/// Parse a weight table from CSV text with rows `n,w`. A header row is
/// allowed; indices must be 0, 1, 2, ... in order.
pub fn parse_weight_table_csv(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let first = fields.next().ok_or(Error::WeightTableParse {
            line: lineno + 1,
            why: "empty row".into(),
        })?;
        if out.is_empty() && first.parse::<usize>().is_err() {
            // header row
            continue;
        }
        let n: usize = first.parse().map_err(|_| Error::WeightTableParse {
            line: lineno + 1,
            why: format!("bad index {first:?}"),
        })?;
        let wtext = fields.next().ok_or(Error::WeightTableParse {
            line: lineno + 1,
            why: "missing weight column".into(),
        })?;
        let w: f64 = wtext.parse().map_err(|_| Error::WeightTableParse {
            line: lineno + 1,
            why: format!("bad weight {wtext:?}"),
        })?;
        if fields.next().is_some() {
            return Err(Error::WeightTableParse {
                line: lineno + 1,
                why: "expected exactly two columns".into(),
            });
        }
        if n != out.len() {
            return Err(Error::WeightTableParse {
                line: lineno + 1,
                why: format!("expected index {}, got {n}", out.len()),
            });
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::WeightTableParse {
                line: lineno + 1,
                why: format!("weight must be strictly positive, got {w}"),
            });
        }
        out.push(w);
    }
    Ok(out)
}
