//! Least-squares slope fits on log-log data, used for decay-exponent
//! diagnostics of kernel norms.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// (min x, max x) of the fitted window, in original coordinates.
    pub window: (f64, f64),
    pub points: usize,
}

/// Fit `ln y = slope * ln x + intercept` by least squares.
/// All `x` and `y` must be strictly positive.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::FitWindowTooSmall {
            got: xs.len().min(ys.len()),
            need: 2,
        });
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if x <= 0.0 || y <= 0.0 {
            return Err(Error::Domain(format!(
                "log-log fit needs positive data, got ({x}, {y})"
            )));
        }
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("degenerate fit: all x equal".into()));
    }
    let slope = sxy / sxx;
    let xmin = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let xmax = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        window: (xmin, xmax),
        points: xs.len(),
    })
}
