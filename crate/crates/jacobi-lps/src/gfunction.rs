//! Littlewood-Paley-Stein square functions g_k (heat) and 𝔤_k (Poisson).
//!
//! On the spectral model the t-integral in
//!
//!   g_k(f)(n)^2 = int_0^inf t^{2k-1} |d^k/dt^k W_t f(n)|^2 dt
//!
//! is exact: with c_j = w_j lambda_j^k F(x_j) p_n(x_j),
//!
//!   g_k(f)(n)^2 = sum_{j,l} c_j c_l Gamma(2k) / (lambda_j + lambda_l)^{2k},
//!
//! and the Poisson variant replaces lambda_j^k by lambda_j^{k/2} and the
//! denominator by (sqrt(lambda_j) + sqrt(lambda_l))^{2k}. Closed-form
//! t-integration is the primary path; the numeric t-quadrature below is an
//! oracle for cross-checks only.

use crate::error::{Error, Result};
use crate::numerics::gamma::gamma_2k;
use crate::numerics::kahan::{sum_sorted_desc, NeumaierSum};
use crate::numerics::quad1d::{integrate_doubling, log_segments, PanelRule};
use crate::quadrature::SpectralModel;
use crate::sequence::{ComplexSequence, FiniteSequence};

/// The Hilbert space B_k = L^2((0, inf), t^{2k-1} dt) in which kernel
/// columns are measured; the order k >= 1 is the only datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BkSpace {
    k: u32,
}

impl BkSpace {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// How a square-function value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkMethod {
    ClosedForm,
    NumericTIntegration,
}

/// A single square-function evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GkResult {
    pub n: usize,
    pub k: u32,
    pub value: f64,
    pub method: GkMethod,
    pub model_size: usize,
}

/// Numeric-oracle output with its achieved error estimate.
#[derive(Debug, Clone, Copy)]
pub struct NumericGk {
    pub value: f64,
    pub error_estimate: f64,
}

/// Which t-integral kernel a quadratic form uses.
#[derive(Debug, Clone, Copy)]
enum SqKernel {
    /// Gamma(2k) / (lambda_j + lambda_l)^{2k}
    Heat,
    /// Gamma(2k) / (sqrt(lambda_j) + sqrt(lambda_l))^{2k}
    Poisson,
}

/// sum_{j,l} c_j c_l Gamma(2k) / kernel(j,l). The terms span many orders of
/// magnitude ((lambda_j + lambda_l)^{-2k} blows up at the soft edge), so they
/// are materialized, sorted by magnitude descending, and summed with
/// compensation. Symmetry halves the work.
fn quadform(lambdas: &[f64], c: &[f64], k: u32, kernel: SqKernel) -> f64 {
    let p = 2 * k as i32;
    let mut terms = Vec::with_capacity(lambdas.len() * (lambdas.len() + 1) / 2);
    for j in 0..lambdas.len() {
        if c[j] == 0.0 {
            continue;
        }
        let lj = match kernel {
            SqKernel::Heat => lambdas[j],
            SqKernel::Poisson => lambdas[j].sqrt(),
        };
        terms.push(c[j] * c[j] / (2.0 * lj).powi(p));
        for l in (j + 1)..lambdas.len() {
            if c[l] == 0.0 {
                continue;
            }
            let ll = match kernel {
                SqKernel::Heat => lambdas[l],
                SqKernel::Poisson => lambdas[l].sqrt(),
            };
            terms.push(2.0 * c[j] * c[l] / (lj + ll).powi(p));
        }
    }
    gamma_2k(k) * sum_sorted_desc(&mut terms)
}

fn coeff_vector(
    model: &SpectralModel,
    fv: &[f64],
    n: usize,
    k: u32,
    kernel: SqKernel,
) -> Vec<f64> {
    model
        .weights()
        .iter()
        .zip(model.lambdas())
        .zip(model.basis_row(n))
        .zip(fv)
        .map(|(((&w, &lam), &p), &f)| {
            let lk = match kernel {
                SqKernel::Heat => lam.powi(k as i32),
                SqKernel::Poisson => lam.powf(k as f64 / 2.0),
            };
            w * lk * f * p
        })
        .collect()
}

fn check_n(model: &SpectralModel, n: usize) -> Result<()> {
    if n >= model.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: model.len() - 1,
        });
    }
    Ok(())
}

/// Heat square function g_k(f)(n), exact in t on the model.
pub fn gk_heat(
    model: &SpectralModel,
    f: &FiniteSequence,
    n: usize,
    k: BkSpace,
) -> Result<GkResult> {
    check_n(model, n)?;
    let fv = model.coeff_values(f)?;
    let c = coeff_vector(model, &fv, n, k.k, SqKernel::Heat);
    let v2 = quadform(model.lambdas(), &c, k.k, SqKernel::Heat);
    Ok(GkResult {
        n,
        k: k.k,
        value: v2.max(0.0).sqrt(),
        method: GkMethod::ClosedForm,
        model_size: model.len(),
    })
}

/// Poisson square function 𝔤_k(f)(n), exact in t on the model
/// (d^k/dt^k e^{-t sqrt(lambda)} = (-sqrt(lambda))^k e^{-t sqrt(lambda)}).
pub fn gk_poisson(
    model: &SpectralModel,
    f: &FiniteSequence,
    n: usize,
    k: BkSpace,
) -> Result<GkResult> {
    check_n(model, n)?;
    let fv = model.coeff_values(f)?;
    let c = coeff_vector(model, &fv, n, k.k, SqKernel::Poisson);
    let v2 = quadform(model.lambdas(), &c, k.k, SqKernel::Poisson);
    Ok(GkResult {
        n,
        k: k.k,
        value: v2.max(0.0).sqrt(),
        method: GkMethod::ClosedForm,
        model_size: model.len(),
    })
}

/// g_k of a complex sequence: |d^k W_t f|^2 splits into the squares of the
/// real and imaginary parts, each a real square function.
pub fn gk_heat_complex(
    model: &SpectralModel,
    f: &ComplexSequence,
    n: usize,
    k: BkSpace,
) -> Result<GkResult> {
    let re = gk_heat(model, &f.re(), n, k)?;
    let im = gk_heat(model, &f.im(), n, k)?;
    Ok(GkResult {
        n,
        k: k.k,
        value: re.value.hypot(im.value),
        method: GkMethod::ClosedForm,
        model_size: model.len(),
    })
}

/// Polarized cross form at index n:
/// int_0^inf t^{2k-1} (d^k W_t f(n)) (d^k W_t h(n)) dt, closed form.
pub fn gk_heat_cross(
    model: &SpectralModel,
    f: &FiniteSequence,
    h: &FiniteSequence,
    n: usize,
    k: BkSpace,
) -> Result<f64> {
    check_n(model, n)?;
    let cf = coeff_vector(model, &model.coeff_values(f)?, n, k.k, SqKernel::Heat);
    let ch = coeff_vector(model, &model.coeff_values(h)?, n, k.k, SqKernel::Heat);
    let p = 2 * k.k as i32;
    let mut terms = Vec::with_capacity(cf.len() * cf.len());
    for (j, &a) in cf.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (l, &b) in ch.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            terms.push(a * b / (model.lambdas()[j] + model.lambdas()[l]).powi(p));
        }
    }
    Ok(gamma_2k(k.k) * sum_sorted_desc(&mut terms))
}

/// B_k norm of the kernel column: ||G_{t,k}(m, n)||_{B_k} with
/// u_j = w_j lambda_j^k p_m(x_j) p_n(x_j). Symmetric in (m, n) exactly.
pub fn bk_kernel_norm(model: &SpectralModel, m: usize, n: usize, k: BkSpace) -> Result<f64> {
    check_n(model, m)?;
    check_n(model, n)?;
    let u: Vec<f64> = model
        .weights()
        .iter()
        .zip(model.lambdas())
        .zip(model.basis_row(m).iter().zip(model.basis_row(n)))
        .map(|((&w, &lam), (&a, &b))| w * lam.powi(k.k as i32) * (a * b))
        .collect();
    let v2 = quadform(model.lambdas(), &u, k.k, SqKernel::Heat);
    Ok(v2.max(0.0).sqrt())
}

/// B_k norm of the first difference G_{t,k}(m+1, n) - G_{t,k}(m, n).
pub fn bk_kernel_diff_norm(
    model: &SpectralModel,
    m: usize,
    n: usize,
    k: BkSpace,
) -> Result<f64> {
    check_n(model, m + 1)?;
    check_n(model, n)?;
    let u: Vec<f64> = model
        .weights()
        .iter()
        .zip(model.lambdas())
        .zip(
            model
                .basis_row(m)
                .iter()
                .zip(model.basis_row(m + 1))
                .zip(model.basis_row(n)),
        )
        .map(|((&w, &lam), ((&a0, &a1), &b))| w * lam.powi(k.k as i32) * ((a1 - a0) * b))
        .collect();
    let v2 = quadform(model.lambdas(), &u, k.k, SqKernel::Heat);
    Ok(v2.max(0.0).sqrt())
}

/// Independent numeric-in-t oracle for g_k: adaptive quadrature of
/// int t^{2k-1} |d^k/dt^k W_t f(n)|^2 dt in log-t coordinates, with T_max
/// chosen so the exponential tail bound drops below 1e-14. Cross-check only;
/// the closed form is the production path.
pub fn gk_numeric_oracle(
    model: &SpectralModel,
    f: &FiniteSequence,
    n: usize,
    k: BkSpace,
) -> Result<NumericGk> {
    check_n(model, n)?;
    let fv = model.coeff_values(f)?;
    let kk = k.k as i32;
    // d^k/dt^k W_t f(n) = sum_j a_j e^{-t lambda_j}
    let a: Vec<f64> = model
        .weights()
        .iter()
        .zip(model.lambdas())
        .zip(model.basis_row(n))
        .zip(&fv)
        .map(|(((&w, &lam), &p), &fj)| w * (-lam).powi(kk) * fj * p)
        .collect();
    let lambdas = model.lambdas().to_vec();
    let deriv = move |t: f64| -> f64 {
        NeumaierSum::sum_iter(
            a.iter()
                .zip(&lambdas)
                .map(|(&aj, &lam)| aj * (-t * lam).exp()),
        )
    };

    let lam_min = model
        .lambdas()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // Tail bound: integrand <= A^2 t^{2k-1} e^{-2 t lam_min}.
    let amp: f64 = model
        .weights()
        .iter()
        .zip(model.lambdas())
        .zip(model.basis_row(n))
        .zip(&fv)
        .map(|(((&w, &lam), &p), &fj)| (w * lam.powi(kk) * fj * p).abs())
        .sum();
    let mut t_max = 10.0 / lam_min;
    for _ in 0..200 {
        let bound = amp * amp * t_max.powi(2 * kk - 1) * (-2.0 * t_max * lam_min).exp()
            / (2.0 * lam_min);
        if bound < 1e-14 * amp.max(1e-30) {
            break;
        }
        t_max *= 1.5;
    }

    let t_min = 1e-9;
    let rule = PanelRule::gauss_legendre(16);
    let segments = log_segments(t_min, t_max, 2);
    let conv = integrate_doubling(
        |y: f64| {
            let t = y.exp();
            let d = deriv(t);
            t.powi(2 * kk) * d * d
        },
        &segments,
        &rule,
        1e-11,
        1e-300,
    )?;
    Ok(NumericGk {
        value: conv.value.max(0.0).sqrt(),
        error_estimate: conv.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::JacobiParams;
    use approx::assert_relative_eq;

    fn model_for(params: JacobiParams, max_index: usize) -> SpectralModel {
        SpectralModel::for_max_index(params, max_index).unwrap()
    }

    fn k(v: u32) -> BkSpace {
        BkSpace::new(v).unwrap()
    }

    #[test]
    fn order_zero_rejected() {
        assert!(BkSpace::new(0).is_err());
    }

    #[test]
    fn heat_anchor_value() {
        // g_1(e_0)(0)^2 at (-1/2,-1/2) -> 1/(2 pi) as L -> inf; O(L^-2).
        let model = SpectralModel::build(JacobiParams::chebyshev(), 512).unwrap();
        let g = gk_heat(&model, &FiniteSequence::basis(0), 0, k(1)).unwrap();
        let target = (1.0 / (2.0 * std::f64::consts::PI)).sqrt();
        assert_relative_eq!(g.value, target, max_relative = 1e-5);
    }

    #[test]
    fn poisson_anchor_value() {
        // 𝔤_1(e_0)(0)^2 -> 2/pi^2.
        let model = SpectralModel::build(JacobiParams::chebyshev(), 512).unwrap();
        let g = gk_poisson(&model, &FiniteSequence::basis(0), 0, k(1)).unwrap();
        let target = (2.0 / (std::f64::consts::PI * std::f64::consts::PI)).sqrt();
        assert_relative_eq!(g.value, target, max_relative = 1e-4);
    }

    #[test]
    fn l2_identity_heat() {
        // sum_n g_k(f)(n)^2 = Gamma(2k)/4^k ||f||^2, exact on the model.
        let params = JacobiParams::new(0.7, 2.3).unwrap();
        let model = model_for(params, 8);
        let f = FiniteSequence::new(vec![0.5, -1.0, 0.0, 2.0, 0.25, -0.125, 1.5, 0.75, -0.5]);
        for kk in 1..=3 {
            let total: f64 = (0..model.len())
                .map(|n| {
                    let v = gk_heat(&model, &f, n, k(kk)).unwrap().value;
                    v * v
                })
                .sum();
            let expect = gamma_2k(kk) / 4.0_f64.powi(kk as i32) * f.norm_l2().powi(2);
            assert_relative_eq!(total, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn l2_identity_poisson() {
        let model = model_for(JacobiParams::chebyshev(), 6);
        let f = FiniteSequence::new(vec![1.0, 2.0, -1.0, 0.5, 0.0, 0.0, 3.0]);
        for kk in 1..=3 {
            let total: f64 = (0..model.len())
                .map(|n| {
                    let v = gk_poisson(&model, &f, n, k(kk)).unwrap().value;
                    v * v
                })
                .sum();
            let expect = gamma_2k(kk) / 4.0_f64.powi(kk as i32) * f.norm_l2().powi(2);
            assert_relative_eq!(total, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn ratio_values_are_the_stated_ones() {
        assert_eq!(gamma_2k(1) / 4.0, 0.25);
        assert_eq!(gamma_2k(2) / 16.0, 0.375);
        assert_eq!(gamma_2k(3) / 64.0, 1.875);
    }

    #[test]
    fn closed_form_agrees_with_numeric_oracle() {
        let model = model_for(JacobiParams::chebyshev(), 16);
        let f = FiniteSequence::basis(0);
        for kk in 1..=3 {
            for n in [0usize, 1, 7, 16] {
                let closed = gk_heat(&model, &f, n, k(kk)).unwrap().value;
                let numeric = gk_numeric_oracle(&model, &f, n, k(kk)).unwrap();
                assert!(
                    (closed - numeric.value).abs() < 1e-9 * closed.max(1.0),
                    "k={kk}, n={n}: closed {closed} vs numeric {}",
                    numeric.value
                );
            }
        }
    }

    #[test]
    fn numeric_oracle_positive_for_basis() {
        let model = model_for(JacobiParams::chebyshev(), 4);
        let g = gk_numeric_oracle(&model, &FiniteSequence::basis(0), 0, k(1)).unwrap();
        assert!(g.value > 0.0);
    }

    #[test]
    fn polarization_identity() {
        // sum_n f(n) h(n) = (4^k / Gamma(2k)) sum_n cross_k(f, h)(n).
        let params = JacobiParams::new(0.0, 0.0).unwrap();
        let model = model_for(params, 8);
        let f = FiniteSequence::new(vec![1.0, -0.5, 0.25, 0.0, 2.0]);
        let h = FiniteSequence::new(vec![0.5, 1.5, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, -2.0]);
        for kk in 1..=3 {
            let total: f64 = (0..model.len())
                .map(|n| gk_heat_cross(&model, &f, &h, n, k(kk)).unwrap())
                .sum();
            let claimed = 4.0_f64.powi(kk as i32) / gamma_2k(kk) * total;
            assert_relative_eq!(claimed, f.dot(&h), max_relative = 1e-8);
        }
    }

    #[test]
    fn composition_reproduces_next_order() {
        // int_0^r t (r-t)^{2k-1} dt = r^{2k+1}/((2k+1) 2k): composing an
        // order-k analysis with an order-1 analysis of the evolution equals
        // g_{k+1}^2 up to that factor. The (t, s) double integral collapses
        // to int r^{2k+1} |d^{k+1} W_r f|^2 dr / ((2k+1) 2k); both sides are
        // computed: the right numerically, the left by the closed form.
        let model = model_for(JacobiParams::chebyshev(), 4);
        let f = FiniteSequence::new(vec![1.0, -2.0, 0.5]);
        for kk in 1..=2u32 {
            for n in [0usize, 2, 5] {
                let fv = model.coeff_values(&f).unwrap();
                let a: Vec<f64> = model
                    .weights()
                    .iter()
                    .zip(model.lambdas())
                    .zip(model.basis_row(n))
                    .zip(&fv)
                    .map(|(((&w, &lam), &p), &fj)| w * (-lam).powi(kk as i32 + 1) * fj * p)
                    .collect();
                let lambdas = model.lambdas().to_vec();
                let deriv = |u: f64| -> f64 {
                    NeumaierSum::sum_iter(
                        a.iter()
                            .zip(&lambdas)
                            .map(|(&aj, &lam)| aj * (-u * lam).exp()),
                    )
                };
                let rule = PanelRule::gauss_legendre(16);
                let lam_min = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
                let segs = log_segments(1e-8, 60.0 / lam_min, 2);
                let factor = (2 * kk + 1) as f64 * (2 * kk) as f64;
                let rhs = integrate_doubling(
                    |y: f64| {
                        let r = y.exp();
                        let d = deriv(r);
                        r.powi(2 * kk as i32 + 2) * d * d
                    },
                    &segs,
                    &rule,
                    1e-11,
                    1e-300,
                )
                .unwrap()
                .value
                    / factor;
                let g = gk_heat(&model, &f, n, k(kk + 1)).unwrap().value;
                let lhs = g * g / factor;
                assert_relative_eq!(lhs, rhs, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn poisson_dominated_by_sqrt2_heat() {
        // 𝔤_1(f)(n) <= sqrt(2) g_1(f)(n) pointwise: exact for the truncated
        // generator, checked on a few sequences and all model indices.
        let model = model_for(JacobiParams::new(0.7, 2.3).unwrap(), 8);
        let seqs = [
            FiniteSequence::basis(0),
            FiniteSequence::new(vec![1.0, -1.0, 2.0, 0.0, 0.5]),
            FiniteSequence::new(vec![0.0, 0.0, 1.0, 3.0, -2.0, 1.0, -1.0, 0.25, 0.125]),
        ];
        for f in &seqs {
            for n in 0..model.len() {
                let gp = gk_poisson(&model, f, n, k(1)).unwrap().value;
                let gh = gk_heat(&model, f, n, k(1)).unwrap().value;
                assert!(
                    gp <= std::f64::consts::SQRT_2 * gh + 1e-12,
                    "domination fails at n={n}: {gp} vs sqrt2*{gh}"
                );
            }
        }
    }

    #[test]
    fn bk_norm_symmetric_exactly() {
        let model = model_for(JacobiParams::chebyshev(), 16);
        for (m, n) in [(0usize, 5usize), (3, 11), (2, 2)] {
            let a = bk_kernel_norm(&model, m, n, k(1)).unwrap();
            let b = bk_kernel_norm(&model, n, m, k(1)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bk_norm_matches_deriv_anchor() {
        // bk_kernel_norm(0, n, 1) at (-1/2,-1/2) is sqrt(2) times the B_1
        // norm of dK_t(n)/dt (the kernel entry is sqrt(2) K_t(n) for n >= 1).
        // theta-phi double-integral anchors (mpmath):
        //   n=1: 0.022535170724313993, n=4: 0.002320760232321320.
        // Model values converge O(L^-2); checked at L = 528 with slack.
        let model = SpectralModel::build(JacobiParams::chebyshev(), 528).unwrap();
        let anchors: [(usize, f64); 2] =
            [(1, 0.022535170724313993), (4, 0.002320760232321320)];
        for (n, anchor2) in anchors {
            let v = bk_kernel_norm(&model, 0, n, k(1)).unwrap();
            let target = std::f64::consts::SQRT_2 * anchor2.sqrt();
            assert_relative_eq!(v, target, max_relative = 2e-4);
        }
    }

    #[test]
    fn complex_gk_reduces_to_real() {
        let model = model_for(JacobiParams::chebyshev(), 4);
        let f = FiniteSequence::new(vec![1.0, -0.25, 0.5]);
        let fc = ComplexSequence::from_real(&f);
        for n in [0usize, 3] {
            let a = gk_heat(&model, &f, n, k(2)).unwrap().value;
            let b = gk_heat_complex(&model, &fc, n, k(2)).unwrap().value;
            assert_relative_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn index_and_support_errors() {
        let model = SpectralModel::build(JacobiParams::chebyshev(), 8).unwrap();
        let f = FiniteSequence::basis(0);
        assert!(gk_heat(&model, &f, 8, k(1)).is_err());
        assert!(gk_heat(&model, &FiniteSequence::basis(9), 0, k(1)).is_err());
        assert!(bk_kernel_norm(&model, 0, 8, k(1)).is_err());
    }
}
