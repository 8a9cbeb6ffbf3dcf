use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("jacobi parameters out of domain: alpha = {alpha}, beta = {beta} (need both > -1)")]
    InvalidParams { alpha: f64, beta: f64 },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("coefficient table too small: need max index >= {needed}, table has {have}")]
    TableTooSmall { needed: usize, have: usize },

    #[error("sequence support {support} exceeds model size {model}")]
    SupportExceedsModel { support: usize, model: usize },

    #[error("quadrature did not converge: target {target:e}, achieved {achieved:e}")]
    QuadratureNoConvergence { target: f64, achieved: f64 },

    #[error("square-function order must satisfy k >= 1")]
    InvalidOrder,

    #[error("exponent p = {p} out of range (need {lo} < p < {hi})")]
    InvalidExponent { p: f64, lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("weight table covers n < {len} but n = {needed} was requested")]
    WeightTableTooShort { len: usize, needed: usize },

    #[error("ratio undefined: denominator vanished while numerator = {numerator:e}")]
    RatioUndefined { numerator: f64 },

    #[error("fit window holds {got} points, need at least {need}")]
    FitWindowTooSmall { got: usize, need: usize },

    #[error("weight table parse error at line {line}: {why}")]
    WeightTableParse { line: usize, why: String },
}

pub type Result<T> = std::result::Result<T, Error>;
