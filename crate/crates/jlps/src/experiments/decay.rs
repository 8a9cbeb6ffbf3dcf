//! `decay`: off-diagonal B_1-norm decay of the kernel columns (size and
//! smoothness slopes), diagonal boundedness, and the Schlafli-integral
//! scaling bands. Emits fit data as CSV plus an optional SVG plot.

use serde::Serialize;
use serde_json::json;

use jacobi_lps::gfunction::{bk_kernel_diff_norm, bk_kernel_norm, BkSpace};
use jacobi_lps::numerics::fit::fit_loglog;
use jacobi_lps::quadrature::SpectralModel;
use jacobi_lps::schlafli::{heat_column_deriv_b1_norm_sq, schlafli_b1_norm_sq, SchlafliTerm};
use jacobi_lps::JacobiParams;

use super::RunContext;
use crate::report::{write_csv, Verdict};
use crate::svg::{loglog_plot, Series};
use crate::CliError;

#[derive(Debug, Serialize)]
struct BandRecord {
    term: String,
    n_grid: Vec<usize>,
    normalized: Vec<f64>,
    band: f64,
}

pub fn run(ctx: &RunContext<'_>) -> Result<(serde_json::Value, Vec<Verdict>), CliError> {
    let cfg = ctx.config;
    let dc = &cfg.decay;
    let cheb = JacobiParams::chebyshev();
    let k1 = BkSpace::new(1)?;

    let top = dc.base_index + dc.separations.iter().max().copied().unwrap_or(0) + 1;
    let model = SpectralModel::build(cheb, cfg.model_size(top.max(dc.diagonal_max)))?;

    // Size and smoothness norms over the separation window.
    let xs: Vec<f64> = dc.separations.iter().map(|&d| d as f64).collect();
    let mut size_norms = Vec::new();
    let mut diff_norms = Vec::new();
    for &d in &dc.separations {
        size_norms.push(bk_kernel_norm(&model, dc.base_index, dc.base_index + d, k1)?);
        diff_norms.push(bk_kernel_diff_norm(&model, dc.base_index, dc.base_index + d, k1)?);
    }
    let size_fit = fit_loglog(&xs, &size_norms)?;
    let smooth_fit = fit_loglog(&xs, &diff_norms)?;

    write_csv(
        ctx.out_dir,
        "decay_fits.csv",
        "separation,norm,fitted_slope,window",
        dc.separations.iter().zip(&size_norms).map(|(&d, &v)| {
            format!(
                "{d},{v:.17e},{:.6},[{};{}]",
                size_fit.slope,
                size_fit.window.0,
                size_fit.window.1
            )
        }),
    )?;
    write_csv(
        ctx.out_dir,
        "decay_diff_fits.csv",
        "separation,norm,fitted_slope,window",
        dc.separations.iter().zip(&diff_norms).map(|(&d, &v)| {
            format!(
                "{d},{v:.17e},{:.6},[{};{}]",
                smooth_fit.slope,
                smooth_fit.window.0,
                smooth_fit.window.1
            )
        }),
    )?;
    if cfg.output.svg {
        loglog_plot(
            &ctx.out_dir.join("decay_norms.svg"),
            "kernel column B1 norms vs separation",
            &[
                Series { label: "size", xs: &xs, ys: &size_norms },
                Series { label: "first-diff", xs: &xs, ys: &diff_norms },
            ],
        )?;
    }

    // Diagonal boundedness with reported empirical max.
    let diag: Vec<f64> = (0..=dc.diagonal_max)
        .map(|n| bk_kernel_norm(&model, n, n, k1))
        .collect::<Result<_, _>>()?;
    let diag_max = diag.iter().cloned().fold(0.0, f64::max);

    // Schlafli scaling bands.
    let band_of = |v: &[f64]| {
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        let min = v.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    };
    let mut bands = Vec::new();
    let i1: Vec<f64> = dc
        .schlafli_i_grid
        .iter()
        .map(|&n| {
            schlafli_b1_norm_sq(n, SchlafliTerm::I1)
                .map(|v| (n as f64 - 0.5).powi(2) * v)
        })
        .collect::<Result<_, _>>()?;
    bands.push(BandRecord {
        term: "(n-1/2)^2 ||I1||^2".into(),
        n_grid: dc.schlafli_i_grid.clone(),
        band: band_of(&i1),
        normalized: i1,
    });
    for (term, power, label) in [
        (SchlafliTerm::J1, 6, "n^6 ||J1||^2"),
        (SchlafliTerm::J2, 4, "n^4 ||J2||^2"),
        (SchlafliTerm::J3, 4, "n^4 ||J3||^2"),
    ] {
        let vals: Vec<f64> = dc
            .schlafli_j_grid
            .iter()
            .map(|&n| schlafli_b1_norm_sq(n, term).map(|v| (n as f64).powi(power) * v))
            .collect::<Result<_, _>>()?;
        bands.push(BandRecord {
            term: label.into(),
            n_grid: dc.schlafli_j_grid.clone(),
            band: band_of(&vals),
            normalized: vals,
        });
    }
    // n ||dK/dt||_{B_1} over the derivative grid.
    let ndk: Vec<f64> = dc
        .deriv_grid
        .iter()
        .map(|&n| heat_column_deriv_b1_norm_sq(n).map(|v| n as f64 * v.sqrt()))
        .collect::<Result<_, _>>()?;
    bands.push(BandRecord {
        term: "n ||dK/dt||".into(),
        n_grid: dc.deriv_grid.clone(),
        band: band_of(&ndk),
        normalized: ndk,
    });

    let mut verdicts = vec![
        Verdict::window(
            "size slope",
            size_fit.slope,
            cfg.tolerances.size_slope.0,
            cfg.tolerances.size_slope.1,
        ),
        Verdict::window(
            "smoothness slope",
            smooth_fit.slope,
            cfg.tolerances.smooth_slope.0,
            cfg.tolerances.smooth_slope.1,
        ),
        Verdict::finite("diagonal B1 norm max", diag_max),
    ];
    for b in &bands {
        verdicts.push(Verdict::le(
            format!("{} band", b.term),
            b.band,
            cfg.tolerances.band_factor,
        ));
    }

    Ok((
        json!({
            "base_index": dc.base_index,
            "separations": dc.separations,
            "size_norms": size_norms,
            "size_slope": size_fit.slope,
            "diff_norms": diff_norms,
            "smoothness_slope": smooth_fit.slope,
            "diagonal_max": diag_max,
            "diagonal": diag,
            "scaling_bands": bands,
            "fit_csv": ["decay_fits.csv", "decay_diff_fits.csv"],
        }),
        verdicts,
    ))
}
