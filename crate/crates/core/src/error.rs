use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value violated an operation's precondition (out-of-range parameter).
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A design point lies outside its domain.
    #[error("point {index} lies outside the domain")]
    OutsideDomain { index: usize },

    /// Radius calibration could not bracket the target coverage.
    #[error("calibration failed: {0}")]
    Calibration(String),

    /// Malformed design or box file.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
