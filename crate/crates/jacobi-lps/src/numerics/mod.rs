//! Shared numerical machinery: compensated summation, gamma functions,
//! panel quadrature, log-log fits, and the double-double oracle type.

pub mod dd;
pub mod fit;
pub mod gamma;
pub mod kahan;
pub mod quad1d;
