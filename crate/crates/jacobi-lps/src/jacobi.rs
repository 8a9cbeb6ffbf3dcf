//! Recurrence coefficients and the tridiagonal Jacobi operator.
//!
//! For parameters alpha, beta > -1 the orthonormal Jacobi polynomials
//! p_n(x) = w_n P_n(x) satisfy the three-term recurrence
//!
//!   x p_n(x) = a_{n-1} p_{n-1}(x) + b_n p_n(x) + a_n p_{n+1}(x),
//!
//! which the operator J replays on sequences:
//!
//!   J f(n) = a_{n-1} f(n-1) + b_n f(n) + a_n f(n+1),
//!   J f(0) = b_0 f(0) + a_0 f(1).
//!
//! The shifted operator is 𝒥 = J - I; -𝒥 is nonnegative with spectrum [0, 2].

use crate::error::{Error, Result};
use crate::numerics::dd::DoubleDouble;
use crate::numerics::gamma::ln_gamma;
use crate::sequence::FiniteSequence;

/// Validated Jacobi parameter pair (alpha, beta), both > -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// The Chebyshev case (-1/2, -1/2), where the heat kernel has a closed
    /// Bessel form.
    pub fn chebyshev() -> Self {
        Self {
            alpha: -0.5,
            beta: -0.5,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True iff alpha >= -1/2 and beta >= -1/2, the hypothesis under which
    /// the weighted norm equivalences are stated. Reporting only: every
    /// computation here is defined for all alpha, beta > -1.
    pub fn theorem_scope(&self) -> bool {
        self.alpha >= -0.5 && self.beta >= -0.5
    }

    /// Total mass of dmu = (1-x)^alpha (1+x)^beta dx on [-1, 1], i.e.
    /// 2^{alpha+beta+1} B(alpha+1, beta+1).
    pub fn measure_mass(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp()
    }
}

/// Tabulated recurrence coefficients a_0..a_N, b_0..b_N and normalization
/// constants w_0..w_N. Immutable after construction.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    params: JacobiParams,
    a: Vec<f64>,
    b: Vec<f64>,
    w: Vec<f64>,
}

impl CoeffTable {
    /// Tabulate coefficients up to index `n_max` inclusive.
    ///
    /// The n = 0 entries use their own closed forms; they do not arise as a
    /// specialization of the n >= 1 displays.
    pub fn build(params: JacobiParams, n_max: usize) -> Self {
        let (al, be) = (params.alpha, params.beta);
        let mut a = Vec::with_capacity(n_max + 1);
        let mut b = Vec::with_capacity(n_max + 1);
        let mut w = Vec::with_capacity(n_max + 1);

        a.push(2.0 / (al + be + 2.0) * ((al + 1.0) * (be + 1.0) / (al + be + 3.0)).sqrt());
        b.push((be - al) / (al + be + 2.0));
        w.push(
            (ln_gamma(al + be + 2.0)
                - (al + be + 1.0) * std::f64::consts::LN_2
                - ln_gamma(al + 1.0)
                - ln_gamma(be + 1.0))
            .exp()
            .sqrt(),
        );

        for n in 1..=n_max {
            let nf = n as f64;
            let s = 2.0 * nf + al + be;
            a.push(
                2.0 / (s + 2.0)
                    * ((nf + 1.0) * (nf + al + 1.0) * (nf + be + 1.0) * (nf + al + be + 1.0)
                        / ((s + 1.0) * (s + 3.0)))
                        .sqrt(),
            );
            b.push((be * be - al * al) / (s * (s + 2.0)));
            // Gamma ratios via log-gamma differences: the raw factors overflow
            // near n ~ 170.
            let ln_w2 = (s + 1.0).ln() + ln_gamma(nf + 1.0) + ln_gamma(nf + al + be + 1.0)
                - (al + be + 1.0) * std::f64::consts::LN_2
                - ln_gamma(nf + al + 1.0)
                - ln_gamma(nf + be + 1.0);
            w.push((0.5 * ln_w2).exp());
        }

        Self { params, a, b, w }
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    /// Largest tabulated index N.
    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }
}

/// Evaluate the orthonormal polynomial p_n(x) by the forward recurrence.
///
/// Forward evaluation of the orthonormal recurrence is stable on [-1, 1] at
/// the scales used here (n <= 512); the digit-loss diagnostic against
/// [`eval_poly_extended`] quantifies the loss instead of switching algorithms.
pub fn eval_poly(table: &CoeffTable, n: usize, x: f64) -> Result<f64> {
    if n > table.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: table.n_max(),
        });
    }
    let mut prev = 0.0;
    let mut cur = table.w[0];
    for m in 0..n {
        let next = ((x - table.b[m]) * cur - if m == 0 { 0.0 } else { table.a[m - 1] } * prev)
            / table.a[m];
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Values p_0(x), ..., p_n(x) in one recurrence pass.
pub fn eval_poly_all(table: &CoeffTable, n: usize, x: f64) -> Result<Vec<f64>> {
    if n > table.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: table.n_max(),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(table.w[0]);
    if n == 0 {
        return Ok(out);
    }
    let mut prev = 0.0;
    let mut cur = table.w[0];
    for m in 0..n {
        let next = ((x - table.b[m]) * cur - if m == 0 { 0.0 } else { table.a[m - 1] } * prev)
            / table.a[m];
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Same recurrence in double-double arithmetic. Oracle path only: serves the
/// digit-loss diagnostic and tests, never production evaluation.
pub fn eval_poly_extended(table: &CoeffTable, n: usize, x: f64) -> Result<f64> {
    if n > table.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: table.n_max(),
        });
    }
    let xd = DoubleDouble::from_f64(x);
    let mut prev = DoubleDouble::ZERO;
    let mut cur = DoubleDouble::from_f64(table.w[0]);
    for m in 0..n {
        let am1 = if m == 0 {
            DoubleDouble::ZERO
        } else {
            DoubleDouble::from_f64(table.a[m - 1])
        };
        let next = xd
            .sub(DoubleDouble::from_f64(table.b[m]))
            .mul(cur)
            .sub(am1.mul(prev))
            .div(DoubleDouble::from_f64(table.a[m]));
        prev = cur;
        cur = next;
    }
    Ok(cur.to_f64())
}

/// Apply J (or the shifted 𝒥 = J - I) to a finite sequence. The support grows
/// by at most one index.
pub fn apply_jacobi(table: &CoeffTable, f: &FiniteSequence, shifted: bool) -> Result<FiniteSequence> {
    let support = match f.support() {
        Some(s) => s,
        None => return Ok(FiniteSequence::zero()),
    };
    if support + 1 > table.n_max() {
        return Err(Error::TableTooSmall {
            needed: support + 1,
            have: table.n_max(),
        });
    }
    let mut out = vec![0.0; support + 2];
    for (n, slot) in out.iter_mut().enumerate() {
        let left = if n == 0 {
            0.0
        } else {
            table.a[n - 1] * f.get(n - 1)
        };
        let mut v = left + table.b[n] * f.get(n) + table.a[n] * f.get(n + 1);
        if shifted {
            v -= f.get(n);
        }
        *slot = v;
    }
    Ok(FiniteSequence::new(out))
}

/// Synthesis F(x) = sum_m f(m) p_m(x), the function with Fourier-Jacobi
/// coefficients f.
pub fn synthesize(table: &CoeffTable, f: &FiniteSequence, x: f64) -> Result<f64> {
    let support = match f.support() {
        Some(s) => s,
        None => return Ok(0.0),
    };
    let polys = eval_poly_all(table, support, x)?;
    Ok(crate::numerics::kahan::NeumaierSum::sum_iter(
        polys.iter().zip(f.entries()).map(|(p, c)| p * c),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const FRAC_1_SQRT_PI: f64 = 0.564189583547756287;

    #[test]
    fn rejects_out_of_domain_params() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -1.5).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
        assert!(JacobiParams::new(-0.999, 7.0).is_ok());
    }

    #[test]
    fn theorem_scope_flag() {
        assert!(JacobiParams::chebyshev().theorem_scope());
        assert!(!JacobiParams::new(-0.75, 0.0).unwrap().theorem_scope());
    }

    #[test]
    fn chebyshev_coefficients() {
        let table = CoeffTable::build(JacobiParams::chebyshev(), 64);
        // b_n = 0 by the beta^2 - alpha^2 symmetry.
        for &b in table.b() {
            assert_eq!(b, 0.0);
        }
        assert_relative_eq!(table.a()[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        for &a in &table.a()[1..] {
            assert_relative_eq!(a, 0.5, epsilon = 1e-15);
        }
        assert_relative_eq!(table.w()[0], FRAC_1_SQRT_PI, epsilon = 1e-14);
    }

    #[test]
    fn general_coefficients_match_reference() {
        // mpmath spot values at (0.7, 2.3).
        let table = CoeffTable::build(JacobiParams::new(0.7, 2.3).unwrap(), 64);
        assert_relative_eq!(table.a()[0], 0.386781592116274324, max_relative = 1e-14);
        assert_relative_eq!(table.b()[0], 0.32, max_relative = 1e-14);
        assert_relative_eq!(table.a()[5], 0.488189073442422950, max_relative = 1e-14);
        assert_relative_eq!(table.b()[5], 0.024615384615384615, max_relative = 1e-14);
        assert_relative_eq!(table.w()[0], 0.7843398376273224, max_relative = 1e-13);
        assert_relative_eq!(table.w()[1], 0.8111449496195611, max_relative = 1e-13);
        assert_relative_eq!(table.w()[3], 0.9311168568928541, max_relative = 1e-13);
        assert_relative_eq!(table.w()[64], 2.9075322151871952, max_relative = 1e-13);
    }

    #[test]
    fn coefficient_asymptotics() {
        for params in [
            JacobiParams::chebyshev(),
            JacobiParams::new(0.0, 0.0).unwrap(),
            JacobiParams::new(0.7, 2.3).unwrap(),
        ] {
            let table = CoeffTable::build(params, 256);
            for n in 64..=256 {
                let bound = 10.0 / n as f64;
                assert!((table.a()[n] - 0.5).abs() < bound);
                assert!(table.b()[n].abs() < bound);
            }
        }
    }

    #[test]
    fn coefficient_positivity_and_b_bound() {
        for params in [
            JacobiParams::new(-0.9, 4.0).unwrap(),
            JacobiParams::new(2.0, -0.5).unwrap(),
        ] {
            let table = CoeffTable::build(params, 128);
            for n in 0..=128 {
                assert!(table.a()[n] > 0.0);
                assert!(table.b()[n].abs() < 1.0);
            }
        }
    }

    #[test]
    fn eval_poly_chebyshev_closed_form() {
        let table = CoeffTable::build(JacobiParams::chebyshev(), 32);
        // p_0 = 1/sqrt(pi) at any x.
        for &x in &[-1.0, -0.3, 0.0, 0.9] {
            assert_relative_eq!(
                eval_poly(&table, 0, x).unwrap(),
                FRAC_1_SQRT_PI,
                epsilon = 1e-15
            );
        }
        // p_n(cos t) = sqrt(2/pi) cos(n t) for n >= 1.
        let sqrt_2_over_pi = 0.797884560802865356;
        assert_relative_eq!(
            eval_poly(&table, 2, 0.5).unwrap(),
            -0.398942280401432678,
            max_relative = 1e-13
        );
        for n in 1..=32usize {
            let theta = 1.1_f64;
            assert_relative_eq!(
                eval_poly(&table, n, theta.cos()).unwrap(),
                sqrt_2_over_pi * (n as f64 * theta).cos(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn eval_poly_general_reference_value() {
        let table = CoeffTable::build(JacobiParams::new(0.7, 2.3).unwrap(), 8);
        assert_relative_eq!(
            eval_poly(&table, 3, 0.3).unwrap(),
            -0.295862381277704376,
            max_relative = 1e-13
        );
    }

    #[test]
    fn eval_poly_index_error() {
        let table = CoeffTable::build(JacobiParams::chebyshev(), 4);
        assert!(eval_poly(&table, 5, 0.0).is_err());
    }

    #[test]
    fn recurrence_residual_on_grid() {
        // a_{n-1} p_{n-1} + b_n p_n + a_n p_{n+1} - x p_n = 0 on a 100-point grid.
        for params in [
            JacobiParams::chebyshev(),
            JacobiParams::new(0.0, 0.0).unwrap(),
            JacobiParams::new(0.7, 2.3).unwrap(),
        ] {
            let table = CoeffTable::build(params, 64);
            for i in 0..100 {
                let x = -1.0 + 2.0 * i as f64 / 99.0;
                let p = eval_poly_all(&table, 63, x).unwrap();
                let pmax = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                for n in 1..=62 {
                    let r = table.a()[n - 1] * p[n - 1] + table.b()[n] * p[n]
                        + table.a()[n] * p[n + 1]
                        - x * p[n];
                    assert!(
                        r.abs() <= 1e-11 * pmax,
                        "residual {r:e} at n={n}, x={x}, params={params:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn extended_precision_recurrence_agrees() {
        let table = CoeffTable::build(JacobiParams::new(0.7, 2.3).unwrap(), 512);
        for &x in &[-0.95, -0.2, 0.4, 0.99] {
            let plain = eval_poly(&table, 512, x).unwrap();
            let extended = eval_poly_extended(&table, 512, x).unwrap();
            // Forward recurrence at n = 512 keeps ~10+ digits on [-1, 1].
            assert_relative_eq!(plain, extended, max_relative = 1e-9);
        }
    }

    #[test]
    fn apply_jacobi_basis_vector() {
        let table = CoeffTable::build(JacobiParams::chebyshev(), 8);
        let jf = apply_jacobi(&table, &FiniteSequence::basis(0), false).unwrap();
        assert_eq!(jf.get(0), 0.0);
        assert_relative_eq!(jf.get(1), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!(jf.support(), Some(1));

        let sf = apply_jacobi(&table, &FiniteSequence::basis(0), true).unwrap();
        assert_relative_eq!(sf.get(0), -1.0, epsilon = 1e-15);
        assert_relative_eq!(sf.get(1), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn apply_jacobi_table_too_small() {
        let table = CoeffTable::build(JacobiParams::chebyshev(), 3);
        let f = FiniteSequence::basis(3);
        assert!(matches!(
            apply_jacobi(&table, &f, false),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn spectral_consistency_of_recurrence() {
        // For v = (p_0(x), ..., p_{L-1}(x)): (J v)(n) = x v(n) for n <= L-2.
        let table = CoeffTable::build(JacobiParams::new(0.7, 2.3).unwrap(), 40);
        let x = 0.37;
        let v = FiniteSequence::new(eval_poly_all(&table, 31, x).unwrap());
        let jv = apply_jacobi(&table, &v, false).unwrap();
        for n in 0..=30 {
            assert_relative_eq!(jv.get(n), x * v.get(n), epsilon = 1e-12);
        }
    }

    #[test]
    fn synthesize_constant_for_e0() {
        let table = CoeffTable::build(JacobiParams::new(0.7, 2.3).unwrap(), 4);
        for &x in &[-0.8, 0.1, 0.6] {
            assert_relative_eq!(
                synthesize(&table, &FiniteSequence::basis(0), x).unwrap(),
                table.w()[0],
                epsilon = 1e-15
            );
        }
    }
}
