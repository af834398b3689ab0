use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
///
/// The variants map onto three coarse categories (see [`Error::category`])
/// which front ends use to pick an exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Hurst parameter must lie in (0, 1), got {0}")]
    InvalidHurst(f64),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("index {name} = {value} is outside 0..{bound}")]
    Index {
        name: &'static str,
        value: i64,
        bound: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series for sigma^2 diverges: q(2H-2) = {exponent} >= -1 (H = {hurst}, q = {q})")]
    DivergentSeries { hurst: f64, q: u32, exponent: f64 },

    #[error("weight function '{label}' supplies derivatives up to order {available}, order {requested} requested")]
    MissingDerivative {
        label: String,
        available: usize,
        requested: usize,
    },

    #[error("weight function '{label}': derivative {order} inconsistent with finite difference at x = {x}")]
    InconsistentDerivative { label: String, order: usize, x: f64 },

    #[error("circulant embedding has a negative eigenvalue {value:e} (threshold {threshold:e})")]
    NegativeEigenvalue { value: f64, threshold: f64 },

    #[error("Cholesky factorization failed for n = {0}: covariance not positive definite")]
    Factorization(usize),

    #[error("n = {n} exceeds the Cholesky cap {cap}")]
    CholeskyCap { n: usize, cap: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

/// Coarse error classes, used by the CLI for its exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Numeric,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidHurst(_)
            | Error::Domain { .. }
            | Error::Index { .. }
            | Error::InvalidArgument(_)
            | Error::MissingDerivative { .. }
            | Error::InconsistentDerivative { .. }
            | Error::CholeskyCap { .. } => ErrorCategory::Config,
            Error::DivergentSeries { .. }
            | Error::NegativeEigenvalue { .. }
            | Error::Factorization(_)
            | Error::NonFinite(_) => ErrorCategory::Numeric,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
