use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range (available up to {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("integral diverged after {panels} panels (partial value {partial:e})")]
    DivergedIntegral { panels: usize, partial: f64 },

    #[error("series truncation not certified after {terms} terms (tail estimate {tail:e})")]
    TruncationNotConverged { terms: usize, tail: f64 },

    #[error("{operation} is not available for {representation} measures; {hint}")]
    UnsupportedRepresentation { operation: &'static str, representation: &'static str, hint: &'static str },

    #[error("moment sequence is not strictly decreasing at index {index}: the measure is degenerate for this construction")]
    DegenerateMeasure { index: usize },

    #[error("moment {index} vanishes; the zero-inverse is undefined")]
    ZeroMoment { index: usize },

    #[error("lambda coincides with moment {index}: C_mu - lambda I is neither injective nor surjective")]
    SingularResolvent { index: usize },

    #[error("lambda = 0 has no resolvent recursion; use the zero-inverse instead")]
    ZeroLambda,

    #[error("coefficient {index} is not a positive real number")]
    NonPositiveCoefficient { index: usize },

    #[error("value overflowed at index {index} (log-magnitude {log_magnitude:.3})")]
    Overflow { index: usize, log_magnitude: f64 },

    #[error("exact arithmetic is not available for {what}")]
    ExactUnsupported { what: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error in `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
