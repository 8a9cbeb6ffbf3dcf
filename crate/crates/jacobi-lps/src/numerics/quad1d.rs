//! Composite Gauss-Legendre panel quadrature with panel doubling.
//!
//! The convergence policy is shared by every 1-D integral in the crate
//! (Bochner subordination, Laplace symbol evaluation, numeric square-function
//! oracles): integrate with `p` panels per segment, double `p`, and accept
//! once the two results agree to the requested relative tolerance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::quadrature::QuadratureRule;

/// Scalars a panel rule can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], obtained from the Jacobi rule
/// at (alpha, beta) = (0, 0).
#[derive(Debug, Clone)]
pub struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    pub fn gauss_legendre(order: usize) -> Self {
        let params = JacobiParams::new(0.0, 0.0).expect("(0,0) is a valid parameter pair");
        let rule = QuadratureRule::gauss_jacobi(params, order)
            .expect("Legendre rule construction cannot fail for order >= 1");
        Self {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
        }
    }

    /// Reference nodes on [-1, 1].
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Reference weights (sum to 2).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]` with a single panel.
    pub fn panel<T: QuadValue>(&self, f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> T {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc.add(f(mid + half * x).scale(w));
        }
        acc.scale(half)
    }

    /// Composite integral over consecutive segments, `panels` panels each.
    pub fn composite<T: QuadValue>(
        &self,
        f: &mut impl FnMut(f64) -> T,
        segments: &[f64],
        panels: usize,
    ) -> T {
        let mut acc = T::zero();
        for pair in segments.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue;
            }
            let h = (b - a) / panels as f64;
            for i in 0..panels {
                acc = acc.add(self.panel(f, a + i as f64 * h, a + (i + 1) as f64 * h));
            }
        }
        acc
    }
}

/// Result of a doubling run.
#[derive(Debug, Clone, Copy)]
pub struct Converged<T> {
    pub value: T,
    /// |I_{2p} - I_p| of the accepted level.
    pub error_estimate: f64,
    pub panels: usize,
}

/// Double the panel count per segment until two consecutive levels agree to
/// `tol` relative (floored at `abs_floor` so that integrals that vanish do
/// not spin forever).
pub fn integrate_doubling<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    segments: &[f64],
    rule: &PanelRule,
    tol: f64,
    abs_floor: f64,
) -> Result<Converged<T>> {
    const MAX_PANELS: usize = 4096;
    let mut panels = 1;
    let mut prev = rule.composite(&mut f, segments, panels);
    loop {
        panels *= 2;
        let next = rule.composite(&mut f, segments, panels);
        let diff = next.sub(prev).norm();
        let scale = next.norm().max(abs_floor);
        if diff <= tol * scale {
            return Ok(Converged {
                value: next,
                error_estimate: diff,
                panels,
            });
        }
        if panels >= MAX_PANELS {
            return Err(Error::QuadratureNoConvergence {
                target: tol,
                achieved: diff / scale,
            });
        }
        prev = next;
    }
}

/// Segment list for an integral over `[lo, hi]` in logarithmic coordinates:
/// returns ln-spaced breakpoints suitable for integrands spanning many
/// scales. The integral is taken in `y = ln s`, so callers must fold the
/// Jacobian `s` into the integrand.
pub fn log_segments(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo);
    let (ylo, yhi) = (lo.ln(), hi.ln());
    let n = (((yhi - ylo) / std::f64::consts::LN_10) * per_decade as f64).ceil() as usize;
    let n = n.max(1);
    (0..=n)
        .map(|i| ylo + (yhi - ylo) * i as f64 / n as f64)
        .collect()
}
