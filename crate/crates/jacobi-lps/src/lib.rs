//! Numerics for the discrete Jacobi operator 𝒥 = J - I on sequences:
//! heat and Poisson semigroups, Littlewood-Paley-Stein square functions
//! g_k and 𝔤_k, Laplace-type spectral multipliers, transplantation between
//! parameter pairs, and discrete Muckenhoupt A_p weight diagnostics.
//!
//! Every operator is evaluated on a spectral model: the eigendecomposition
//! of the L x L truncation of J, which coincides with Gauss-Jacobi
//! quadrature for the orthogonality measure. Identities that are exact for
//! the truncated operator (Parseval, the g_k l^2 identity, semigroup laws)
//! hold on the model to rounding; everything else converges under
//! L-doubling.

pub mod bessel;
pub mod error;
pub mod gfunction;
pub mod jacobi;
pub mod multiplier;
pub mod numerics;
pub mod quadrature;
pub mod schlafli;
pub mod semigroup;
pub mod sequence;
pub mod transplant;
pub mod weights;

pub use error::{Error, Result};
pub use jacobi::{CoeffTable, JacobiParams};
pub use quadrature::{QuadratureRule, SpectralModel};
pub use sequence::{ComplexSequence, FiniteSequence};
