//! Transplantation between Jacobi parameter pairs and the composition
//! identity that reduces g_k analysis to the Chebyshev case.
//!
//! The transplantation kernel is
//!
//!   K_{src}^{dst}(n, m) = int p_n^{dst} p_m^{src} dmu_mix,
//!
//! where mu_mix has parameters ((src + dst)/2 componentwise). The integrand
//! is a polynomial of degree n + m, so a Gauss rule of size > (n + m)/2 is
//! exact; values are still confirmed by rule doubling to 1e-10. Kernel decay
//! in |n - m| is not quantified here, so operator applications are truncated
//! and judged by stability under truncation doubling.

use crate::error::{Error, Result};
use crate::jacobi::{eval_poly_all, CoeffTable, JacobiParams};
use crate::numerics::kahan::NeumaierSum;
use crate::quadrature::{QuadratureRule, SpectralModel};
use crate::semigroup::{apply_semigroup, SemigroupKind};
use crate::sequence::FiniteSequence;

fn mixed_params(src: JacobiParams, dst: JacobiParams) -> JacobiParams {
    JacobiParams::new(
        0.5 * (src.alpha() + dst.alpha()),
        0.5 * (src.beta() + dst.beta()),
    )
    .expect("midpoint of parameters > -1 stays > -1")
}

/// Kernel matrix block K(n, m) for n < rows, m < cols, on one shared rule.
fn kernel_block(
    src: JacobiParams,
    dst: JacobiParams,
    rows: usize,
    cols: usize,
    rule_size: usize,
) -> Result<Vec<Vec<f64>>> {
    let mix = mixed_params(src, dst);
    let rule = QuadratureRule::gauss_jacobi(mix, rule_size)?;
    let src_table = CoeffTable::build(src, cols.saturating_sub(1));
    let dst_table = CoeffTable::build(dst, rows.saturating_sub(1));
    // Tabulate both families at the shared nodes.
    let mut src_vals = Vec::with_capacity(rule.len());
    let mut dst_vals = Vec::with_capacity(rule.len());
    for &x in rule.nodes() {
        src_vals.push(eval_poly_all(&src_table, cols - 1, x)?);
        dst_vals.push(eval_poly_all(&dst_table, rows - 1, x)?);
    }
    let mut block = vec![vec![0.0; cols]; rows];
    for (n, row) in block.iter_mut().enumerate() {
        for (m, slot) in row.iter_mut().enumerate() {
            *slot = NeumaierSum::sum_iter(
                rule.weights()
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| w * dst_vals[j][n] * src_vals[j][m]),
            );
        }
    }
    Ok(block)
}

/// Single kernel entry K_{src}^{dst}(n, m), rule-doubled from `l` until the
/// value moves by less than 1e-10.
pub fn transplantation_kernel(
    src: JacobiParams,
    dst: JacobiParams,
    n: usize,
    m: usize,
    l: usize,
) -> Result<f64> {
    let mut rule_size = l.max((n + m) / 2 + 2).max(8);
    let mut prev = kernel_block(src, dst, n + 1, m + 1, rule_size)?[n][m];
    for _ in 0..6 {
        rule_size *= 2;
        let next = kernel_block(src, dst, n + 1, m + 1, rule_size)?[n][m];
        if (next - prev).abs() <= 1e-10 * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNoConvergence {
        target: 1e-10,
        achieved: f64::NAN,
    })
}

/// Transplanted sequence with its truncation-stability diagnostics.
#[derive(Debug, Clone)]
pub struct TransplantResult {
    pub seq: FiniteSequence,
    /// max entrywise movement when the quadrature rule doubles
    pub max_shift: f64,
    /// true when max_shift < 1e-8
    pub stable: bool,
}

/// T_{src}^{dst} f(n) = sum_m f(m) K(n, m), truncated to `l_out` entries.
pub fn apply_transplantation(
    src: JacobiParams,
    dst: JacobiParams,
    f: &FiniteSequence,
    l_out: usize,
) -> Result<TransplantResult> {
    let support = f.support().map_or(0, |s| s + 1);
    if support == 0 {
        return Ok(TransplantResult {
            seq: FiniteSequence::zero(),
            max_shift: 0.0,
            stable: true,
        });
    }
    let degree = l_out + support;
    let rule_size = (degree / 2 + 8).max(32);
    let act = |rs: usize| -> Result<Vec<f64>> {
        let block = kernel_block(src, dst, l_out, support, rs)?;
        Ok(block
            .iter()
            .map(|row| {
                NeumaierSum::sum_iter(row.iter().zip(f.entries()).map(|(&k, &c)| k * c))
            })
            .collect())
    };
    let coarse = act(rule_size)?;
    let fine = act(2 * rule_size)?;
    let max_shift = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(TransplantResult {
        seq: FiniteSequence::new(fine),
        max_shift,
        stable: max_shift < 1e-8,
    })
}

/// Comparison of G_{t,k} at `params` against the three-operator composition
/// (transplant to Chebyshev, run G_{t,k} there, transplant back), per
/// truncation level.
#[derive(Debug, Clone)]
pub struct CompositionReport {
    pub t_grid: Vec<f64>,
    /// truncation sizes tried (doubling ladder)
    pub levels: Vec<usize>,
    /// max |direct - composed| over the t grid and reported indices, per level
    pub max_discrepancy_by_level: Vec<f64>,
    pub final_max_discrepancy: f64,
    /// discrepancies never increased along the ladder
    pub nonincreasing: bool,
}

/// Check the composition identity on a sequence with small support. The
/// identity is exact for the untruncated operators; truncation makes the
/// discrepancy-vs-level trend the testable surrogate.
pub fn composition_check(
    params: JacobiParams,
    f: &FiniteSequence,
    k: u32,
    t_grid: &[f64],
    levels: usize,
) -> Result<CompositionReport> {
    if k == 0 {
        return Err(Error::InvalidOrder);
    }
    let support = f.support().map_or(0, |s| s + 1);
    if support > 16 {
        return Err(Error::Domain(format!(
            "composition check expects support <= 16, got {support}"
        )));
    }
    let cheb = JacobiParams::chebyshev();
    let n_report = support + 8;
    let base_trunc = 4 * support + 64;

    let mut level_sizes = Vec::new();
    let mut discrepancies = Vec::new();
    for level in 0..levels.max(1) {
        let trunc = base_trunc << level;
        let direct_model = SpectralModel::for_max_index(params, n_report)?;
        let cheb_model = SpectralModel::for_max_index(cheb, trunc - 1)?;

        let mut worst = 0.0_f64;
        let to_cheb = apply_transplantation(params, cheb, f, trunc)?;
        for &t in t_grid {
            let direct = apply_semigroup(&direct_model, f, t, SemigroupKind::Heat, k)?;
            let evolved = apply_semigroup(&cheb_model, &to_cheb.seq, t, SemigroupKind::Heat, k)?;
            let back = apply_transplantation(cheb, params, &evolved, n_report)?;
            for n in 0..n_report {
                worst = worst.max((direct.get(n) - back.seq.get(n)).abs());
            }
        }
        level_sizes.push(trunc);
        discrepancies.push(worst);
    }
    let nonincreasing = discrepancies.windows(2).all(|w| w[1] <= w[0] * 1.0000001);
    Ok(CompositionReport {
        t_grid: t_grid.to_vec(),
        levels: level_sizes,
        final_max_discrepancy: *discrepancies.last().unwrap(),
        max_discrepancy_by_level: discrepancies,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn same_params_kernel_is_identity() {
        let p = JacobiParams::new(0.7, 2.3).unwrap();
        for (n, m) in [(0usize, 0usize), (3, 3), (2, 5)] {
            let v = transplantation_kernel(p, p, n, m, 16).unwrap();
            let expect = if n == m { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-10, "K({n},{m}) = {v}");
        }
    }

    #[test]
    fn kernel_reference_value() {
        // K_{(-1/2,-1/2)}^{(1/2,1/2)}(0,0) = 2 sqrt(2)/pi.
        let src = JacobiParams::chebyshev();
        let dst = JacobiParams::new(0.5, 0.5).unwrap();
        let v = transplantation_kernel(src, dst, 0, 0, 8).unwrap();
        assert_relative_eq!(v, 0.900316316157106070, max_relative = 1e-12);
    }

    #[test]
    fn kernel_swap_symmetry() {
        // K_{ab}^{cd}(n, m) = K_{cd}^{ab}(m, n): same integrand.
        let a = JacobiParams::new(0.0, 1.0).unwrap();
        let b = JacobiParams::new(0.5, -0.25).unwrap();
        for (n, m) in [(0usize, 2usize), (3, 1), (4, 4)] {
            let fwd = transplantation_kernel(a, b, n, m, 16).unwrap();
            let bwd = transplantation_kernel(b, a, m, n, 16).unwrap();
            assert_relative_eq!(fwd, bwd, epsilon = 1e-13);
        }
    }

    #[test]
    fn kernel_stable_under_rule_doubling() {
        let src = JacobiParams::chebyshev();
        let dst = JacobiParams::new(0.5, 0.5).unwrap();
        for (n, m) in [(0usize, 0usize), (7, 3), (16, 16)] {
            let coarse = transplantation_kernel(src, dst, n, m, 32).unwrap();
            let fine = transplantation_kernel(src, dst, n, m, 64).unwrap();
            assert!((coarse - fine).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_identity_when_params_match() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = FiniteSequence::new(vec![1.0, -2.0, 0.5, 0.25]);
        let r = apply_transplantation(p, p, &f, 16).unwrap();
        assert!(r.stable);
        for n in 0..16 {
            assert!((r.seq.get(n) - f.get(n)).abs() < 1e-11);
        }
    }

    #[test]
    fn apply_is_linear() {
        let src = JacobiParams::new(0.0, 0.0).unwrap();
        let dst = JacobiParams::chebyshev();
        let f = FiniteSequence::new(vec![1.0, 0.5]);
        let g = FiniteSequence::new(vec![0.0, -1.0, 2.0]);
        let tf = apply_transplantation(src, dst, &f, 24).unwrap().seq;
        let tg = apply_transplantation(src, dst, &g, 24).unwrap().seq;
        let tfg = apply_transplantation(src, dst, &f.add(&g), 24).unwrap().seq;
        for n in 0..24 {
            assert!((tfg.get(n) - tf.get(n) - tg.get(n)).abs() < 1e-11);
        }
    }

    #[test]
    fn approximate_l2_preservation() {
        // Diagnostic, not a theorem: smooth inputs keep their l2 norm within
        // [0.9, 1.1] under transplantation between nearby parameter pairs.
        let src = JacobiParams::new(0.0, 0.0).unwrap();
        let dst = JacobiParams::chebyshev();
        let f = FiniteSequence::new(vec![1.0, 0.8, 0.5, 0.25, 0.1, 0.05]);
        let r = apply_transplantation(src, dst, &f, 64).unwrap();
        let ratio = r.seq.norm_l2() / f.norm_l2();
        assert!(
            (0.9..=1.1).contains(&ratio),
            "norm ratio {ratio} outside diagnostic band"
        );
    }

    #[test]
    fn composition_identity_at_chebyshev_is_exact() {
        let cheb = JacobiParams::chebyshev();
        let f = FiniteSequence::new(vec![1.0, -0.5, 0.25]);
        let rep = composition_check(cheb, &f, 1, &[0.5, 1.0], 1).unwrap();
        assert!(
            rep.final_max_discrepancy < 1e-10,
            "chebyshev composition should be identity-exact: {:?}",
            rep.max_discrepancy_by_level
        );
    }

    #[test]
    fn composition_converges_for_legendre() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = FiniteSequence::basis(0);
        let rep = composition_check(p, &f, 1, &[1.0], 3).unwrap();
        assert!(
            rep.final_max_discrepancy < 1e-6,
            "final discrepancy {:?}",
            rep.max_discrepancy_by_level
        );
        assert!(
            rep.nonincreasing,
            "discrepancy ladder not monotone: {:?}",
            rep.max_discrepancy_by_level
        );
    }

    #[test]
    fn composition_scale_invariant() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = FiniteSequence::new(vec![1.0, 1.0]);
        let a = composition_check(p, &f, 1, &[1.0], 2).unwrap();
        let b = composition_check(p, &f.scaled(7.5), 1, &[1.0], 2).unwrap();
        for (x, y) in a
            .max_discrepancy_by_level
            .iter()
            .zip(&b.max_discrepancy_by_level)
        {
            assert_relative_eq!(y / 7.5, x, max_relative = 1e-6);
        }
    }
}
