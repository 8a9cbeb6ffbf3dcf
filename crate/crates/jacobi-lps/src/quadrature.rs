//! Gauss-Jacobi quadrature from the truncated Jacobi matrix, and the spectral
//! model all semigroup and square-function computations run on.
//!
//! Nodes are the eigenvalues of the L x L truncation of J (symmetric
//! tridiagonal: diagonal b_0..b_{L-1}, off-diagonal a_0..a_{L-2}), found by
//! Sturm-count bisection. Weights come from the Christoffel identity
//! w_j = 1 / sum_{m<L} p_m(x_j)^2, which only needs polynomial values at the
//! nodes, not eigenvectors.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::jacobi::{eval_poly_all, CoeffTable, JacobiParams};
use crate::numerics::kahan::NeumaierSum;
use crate::sequence::FiniteSequence;

/// An L-point Gauss rule for dmu_{alpha,beta}: strictly ascending interior
/// nodes, strictly positive weights, exact on polynomials of degree <= 2L-1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    params: JacobiParams,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_jacobi(params: JacobiParams, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("rule size L must be >= 1".into()));
        }
        let (nodes, weights, _) = build_parts(params, l);
        Ok(Self {
            params,
            nodes,
            weights,
        })
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// sum_j w_j g(x_j).
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        NeumaierSum::sum_iter(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)))
    }

    /// Debug dump: `j,x_j,w_j` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "j,x_j,w_j")?;
        for (j, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            writeln!(out, "{j},{x:.17e},{w:.17e}")?;
        }
        Ok(())
    }
}

/// The quadrature rule together with the spectral data of the truncated
/// operator: lambda_j = 1 - x_j in (0, 2) and the basis matrix
/// P[m][j] = p_m(x_j) for m < L. Immutable; concurrent reads are safe.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    rule: QuadratureRule,
    lambdas: Vec<f64>,
    /// Row-major L x L: row m holds p_m at all nodes.
    basis: Vec<f64>,
}

impl SpectralModel {
    pub fn build(params: JacobiParams, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("model size L must be >= 1".into()));
        }
        let (nodes, weights, basis) = build_parts(params, l);
        let lambdas = nodes.iter().map(|x| 1.0 - x).collect();
        Ok(Self {
            rule: QuadratureRule {
                params,
                nodes,
                weights,
            },
            lambdas,
            basis,
        })
    }

    /// Rule-size policy: L = max(2 * max_index + 16, 64). Computations that
    /// need a converged scalar double L from here.
    pub fn for_max_index(params: JacobiParams, max_index: usize) -> Result<Self> {
        Self::build(params, (2 * max_index + 16).max(64))
    }

    /// Same parameters at twice the size.
    pub fn double(&self) -> Result<Self> {
        Self::build(self.params(), 2 * self.len())
    }

    pub fn params(&self) -> JacobiParams {
        self.rule.params
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    /// p_m at all nodes.
    pub fn basis_row(&self, m: usize) -> &[f64] {
        let l = self.len();
        &self.basis[m * l..(m + 1) * l]
    }

    /// Synthesis at the nodes: F(x_j) = sum_m f(m) p_m(x_j).
    /// Errors if the support does not fit the model.
    pub fn coeff_values(&self, f: &FiniteSequence) -> Result<Vec<f64>> {
        let l = self.len();
        match f.support() {
            None => Ok(vec![0.0; l]),
            Some(s) if s >= l => Err(Error::SupportExceedsModel { support: s, model: l }),
            Some(s) => {
                let mut out = vec![0.0; l];
                for m in 0..=s {
                    let c = f.get(m);
                    if c == 0.0 {
                        continue;
                    }
                    let row = self.basis_row(m);
                    for (o, p) in out.iter_mut().zip(row) {
                        *o += c * p;
                    }
                }
                Ok(out)
            }
        }
    }
}

fn build_parts(params: JacobiParams, l: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let table = CoeffTable::build(params, l);
    let nodes = tridiag_eigenvalues(&table.b()[..l], &table.a()[..l.saturating_sub(1)]);
    let mut weights = Vec::with_capacity(l);
    let mut basis = vec![0.0; l * l];
    for (j, &x) in nodes.iter().enumerate() {
        let p = eval_poly_all(&table, l - 1, x).expect("table covers l-1");
        let christoffel = NeumaierSum::sum_iter(p.iter().map(|v| v * v));
        weights.push(1.0 / christoffel);
        for (m, &v) in p.iter().enumerate() {
            basis[m * l + j] = v;
        }
    }
    (nodes, weights, basis)
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x`, by the Sturm sequence / LDL^T pivot count.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 {
            f64::MIN_POSITIVE.sqrt()
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues, ascending, by bisection on the Sturm count. Eigenvalues
/// of a Jacobi matrix are simple, so ties cannot occur.
fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![diag[0]];
    }
    // Gershgorin enclosure.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = off.get(i.wrapping_sub(1)).map_or(0.0, |v| v.abs())
            + off.get(i).map_or(0.0, |v| v.abs());
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = 1e-12 * (hi - lo).max(1.0);
    lo -= pad;
    hi += pad;

    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        // ~60 halvings reach machine precision on [-1-eps, 1+eps].
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if b - a <= 2.0 * f64::EPSILON * mid.abs().max(1e-3) {
                break;
            }
            if sturm_count(diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Chebyshev-Gauss closed form: the independent oracle for (-1/2, -1/2).
    fn chebyshev_gauss(l: usize) -> (Vec<f64>, Vec<f64>) {
        let nodes: Vec<f64> = (1..=l)
            .rev()
            .map(|j| ((2 * j - 1) as f64 * std::f64::consts::PI / (2 * l) as f64).cos())
            .collect();
        let weights = vec![std::f64::consts::PI / l as f64; l];
        (nodes, weights)
    }

    #[test]
    fn chebyshev_rule_matches_closed_form() {
        for l in [1, 2, 3, 17, 64, 256] {
            let rule = QuadratureRule::gauss_jacobi(JacobiParams::chebyshev(), l).unwrap();
            let (nodes, weights) = chebyshev_gauss(l);
            for j in 0..l {
                assert!(
                    (rule.nodes()[j] - nodes[j]).abs() < 1e-12,
                    "node {j} of L={l}: {} vs {}",
                    rule.nodes()[j],
                    nodes[j]
                );
                assert!((rule.weights()[j] - weights[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn three_point_chebyshev_rule() {
        let rule = QuadratureRule::gauss_jacobi(JacobiParams::chebyshev(), 3).unwrap();
        let s3 = 3.0_f64.sqrt() / 2.0;
        assert_relative_eq!(rule.nodes()[0], -s3, epsilon = 1e-14);
        assert!(rule.nodes()[1].abs() < 1e-14);
        assert_relative_eq!(rule.nodes()[2], s3, epsilon = 1e-14);
        for &w in rule.weights() {
            assert_relative_eq!(w, std::f64::consts::PI / 3.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn mass_conservation() {
        for (params, mass) in [
            (JacobiParams::chebyshev(), std::f64::consts::PI),
            (JacobiParams::new(0.0, 0.0).unwrap(), 2.0),
            (JacobiParams::new(0.7, 2.3).unwrap(), 1.625516761620960619),
        ] {
            assert_relative_eq!(params.measure_mass(), mass, max_relative = 1e-13);
            for l in [1, 2, 7, 64] {
                let rule = QuadratureRule::gauss_jacobi(params, l).unwrap();
                let total: f64 = rule.weights().iter().sum();
                assert_relative_eq!(total, mass, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn exactness_on_low_degree() {
        // int x^2 dmu_{-1/2,-1/2} = pi/2, already exact at L = 2.
        let rule = QuadratureRule::gauss_jacobi(JacobiParams::chebyshev(), 2).unwrap();
        assert_relative_eq!(
            rule.integrate(|x| x * x),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-14
        );
    }

    #[test]
    fn orthonormality_via_integration() {
        let params = JacobiParams::new(0.7, 2.3).unwrap();
        let table = CoeffTable::build(params, 8);
        let rule = QuadratureRule::gauss_jacobi(params, 10).unwrap();
        for n in 0..=8usize {
            for m in 0..=8usize {
                let v = rule.integrate(|x| {
                    let p = eval_poly_all(&table, 8, x).unwrap();
                    p[n] * p[m]
                });
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!(
                    (v - expect).abs() < 1e-12,
                    "Gram({n},{m}) = {v} at (0.7,2.3)"
                );
            }
        }
    }

    #[test]
    fn node_properties() {
        for params in [
            JacobiParams::chebyshev(),
            JacobiParams::new(0.7, 2.3).unwrap(),
        ] {
            let rule = QuadratureRule::gauss_jacobi(params, 128).unwrap();
            for w in rule.weights() {
                assert!(*w > 0.0);
            }
            for pair in rule.nodes().windows(2) {
                assert!(pair[0] < pair[1]);
            }
            assert!(rule.nodes()[0] > -1.0);
            assert!(rule.nodes()[127] < 1.0);
        }
    }

    #[test]
    fn node_interlacing() {
        let params = JacobiParams::new(0.7, 2.3).unwrap();
        for l in [4, 9, 33] {
            let small = QuadratureRule::gauss_jacobi(params, l).unwrap();
            let big = QuadratureRule::gauss_jacobi(params, l + 1).unwrap();
            for j in 0..l {
                assert!(big.nodes()[j] < small.nodes()[j]);
                assert!(small.nodes()[j] < big.nodes()[j + 1]);
            }
        }
    }

    #[test]
    fn model_lambdas_in_spectrum() {
        let model = SpectralModel::build(JacobiParams::new(0.7, 2.3).unwrap(), 512).unwrap();
        for &l in model.lambdas() {
            assert!(l > 0.0 && l < 2.0);
        }
    }

    #[test]
    fn model_discrete_orthonormality() {
        // Full Gram matrix: sum_j w_j P[m][j] P[m'][j] = delta to 1e-10
        // entrywise for m, m' <= 128 on a 129-point rule.
        for params in [
            JacobiParams::chebyshev(),
            JacobiParams::new(0.0, 0.0).unwrap(),
            JacobiParams::new(0.7, 2.3).unwrap(),
        ] {
            let model = SpectralModel::build(params, 129).unwrap();
            let w = model.weights();
            let mut defect = 0.0_f64;
            for m in 0..=128 {
                for mp in m..=128 {
                    let dot = NeumaierSum::sum_iter(
                        model
                            .basis_row(m)
                            .iter()
                            .zip(model.basis_row(mp))
                            .zip(w)
                            .map(|((a, b), w)| w * (a * b)),
                    );
                    let expect = if m == mp { 1.0 } else { 0.0 };
                    defect = defect.max((dot - expect).abs());
                }
            }
            assert!(defect < 1e-10, "gram defect {defect:e} for {params:?}");
        }
    }

    #[test]
    fn integrate_exponential_converges_under_doubling() {
        let params = JacobiParams::new(0.7, 2.3).unwrap();
        for t in [0.5, 5.0, 50.0] {
            let g = |x: f64| (-t * (1.0 - x)).exp();
            let mut l = 64;
            let mut prev = QuadratureRule::gauss_jacobi(params, l).unwrap().integrate(g);
            let mut converged = false;
            for _ in 0..6 {
                l *= 2;
                let next = QuadratureRule::gauss_jacobi(params, l).unwrap().integrate(g);
                if (next - prev).abs() <= 1e-10 * next.abs() {
                    converged = true;
                    break;
                }
                prev = next;
            }
            assert!(converged, "no convergence for t={t}");
        }
    }

    #[test]
    fn csv_dump_shape() {
        let rule = QuadratureRule::gauss_jacobi(JacobiParams::chebyshev(), 4).unwrap();
        let mut buf = Vec::new();
        rule.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("j,x_j,w_j"));
    }
}
