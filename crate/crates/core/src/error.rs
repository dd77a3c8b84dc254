use alloc::string::String;

use crate::fock::ModeName;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mode {0} appears more than once")]
    LabelCollision(ModeName),
    #[error("unknown mode {0}")]
    UnknownMode(ModeName),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigenvalue {0:e} is negative beyond the clamp tolerance")]
    NegativeEigenvalue(f64),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),
    #[error("incompatible encoding: {0}")]
    IncompatibleEncoding(String),
    #[error("series not converged after {terms} terms (best estimate {value})")]
    NotConverged { value: f64, terms: usize },
    #[error("truncation not converged up to cutoff {cutoff} (best value {value})")]
    TruncationNotConverged { value: f64, cutoff: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { what, detail: detail.into() }
}
