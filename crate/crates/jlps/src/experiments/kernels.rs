//! `kernels`: the Chebyshev closed-form oracle against the quadrature heat
//! kernel, the semigroup law on the model, and the Poisson subordination
//! identity. Emits the kernel grid as a CSV side file.

use serde::Serialize;
use serde_json::json;

use jacobi_lps::bessel::BesselScaledTable;
use jacobi_lps::quadrature::SpectralModel;
use jacobi_lps::semigroup::{
    chebyshev_heat_kernel_from, heat_kernel, poisson_kernel, HeatKernelQuery, PoissonPath,
};
use jacobi_lps::JacobiParams;

use super::RunContext;
use crate::report::{write_csv, Verdict};
use crate::CliError;

#[derive(Debug, Serialize)]
struct OracleSummary {
    t: f64,
    max_abs_error: f64,
}

#[derive(Debug, Serialize)]
struct LawSummary {
    t: f64,
    s: f64,
    max_abs_error: f64,
}

#[derive(Debug, Serialize)]
struct SubordinationSummary {
    t: f64,
    max_abs_error: f64,
}

pub fn run(ctx: &RunContext<'_>) -> Result<(serde_json::Value, Vec<Verdict>), CliError> {
    let cfg = ctx.config;
    let kc = &cfg.kernels;
    let cheb = JacobiParams::chebyshev();

    // Oracle grid at the doubled policy size.
    let model = SpectralModel::build(cheb, cfg.model_size(kc.index_max))?.double()?;
    let mut grid_rows: Vec<String> = Vec::new();
    let mut oracle = Vec::new();
    for &t in &kc.times {
        let table = BesselScaledTable::build(t, 2 * kc.index_max)?;
        let mut worst = 0.0_f64;
        for m in 0..=kc.index_max {
            for n in m..=kc.index_max {
                let q = heat_kernel(&model, &HeatKernelQuery { t, m, n, k: 0 })?;
                let c = chebyshev_heat_kernel_from(&table, m, n)?;
                worst = worst.max((q - c).abs());
                grid_rows.push(format!("{t},{m},{n},{q:.17e},quadrature"));
                grid_rows.push(format!("{t},{m},{n},{c:.17e},bessel"));
            }
        }
        oracle.push(OracleSummary {
            t,
            max_abs_error: worst,
        });
    }
    write_csv(ctx.out_dir, "kernels_grid.csv", "t,m,n,value,path", grid_rows)?;

    // Semigroup law on the full model (composition over every internal index).
    let small = SpectralModel::build(cheb, cfg.model_size(kc.subordination_index_max))?;
    let l = small.len();
    let mut law = Vec::new();
    for &(t, s) in &kc.semigroup_pairs {
        let kernel = |tt: f64| -> Result<Vec<Vec<f64>>, jacobi_lps::Error> {
            (0..l)
                .map(|m| {
                    (0..l)
                        .map(|n| heat_kernel(&small, &HeatKernelQuery { t: tt, m, n, k: 0 }))
                        .collect()
                })
                .collect()
        };
        let kt = kernel(t)?;
        let ks = kernel(s)?;
        let kts = kernel(t + s)?;
        let mut worst = 0.0_f64;
        for m in 0..l {
            for n in 0..l {
                let composed: f64 = (0..l).map(|r| kt[m][r] * ks[r][n]).sum();
                worst = worst.max((composed - kts[m][n]).abs());
            }
        }
        law.push(LawSummary {
            t,
            s,
            max_abs_error: worst,
        });
    }

    // Subordination vs direct Poisson kernel.
    let mut subordination = Vec::new();
    for &t in &kc.subordination_times {
        let mut worst = 0.0_f64;
        for m in 0..=kc.subordination_index_max {
            for n in m..=kc.subordination_index_max {
                let d = poisson_kernel(&small, t, m, n, PoissonPath::Direct)?;
                let s = poisson_kernel(&small, t, m, n, PoissonPath::Subordination)?;
                worst = worst.max((d - s).abs());
            }
        }
        subordination.push(SubordinationSummary {
            t,
            max_abs_error: worst,
        });
    }

    let oracle_max = oracle.iter().map(|o| o.max_abs_error).fold(0.0, f64::max);
    let law_max = law.iter().map(|o| o.max_abs_error).fold(0.0, f64::max);
    let sub_max = subordination
        .iter()
        .map(|o| o.max_abs_error)
        .fold(0.0, f64::max);
    let verdicts = vec![
        Verdict::le("chebyshev oracle max abs error", oracle_max, cfg.tolerances.kernel_abs),
        Verdict::le("semigroup law max abs error", law_max, cfg.tolerances.semigroup_abs),
        Verdict::le(
            "subordination vs direct max abs error",
            sub_max,
            cfg.tolerances.subordination_abs,
        ),
    ];
    Ok((
        json!({
            "oracle": oracle,
            "semigroup_law": law,
            "subordination": subordination,
            "grid_csv": "kernels_grid.csv",
        }),
        verdicts,
    ))
}
