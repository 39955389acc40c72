//! Error type shared across the library.

/// Errors produced by validation, parsing, and the numerical routines.
#[derive(Debug, thiserror::Error)]
pub enum CrpError {
    /// A constructor or validator rejected a field value.
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },

    /// A scalar operation was called outside its domain
    /// (negative argument, derivative value out of range, ...).
    #[error("{0}")]
    Domain(String),

    /// Two sampled objects that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An integrator produced a non-finite value, typically signalling
    /// parameter magnitudes the fixed step cannot resolve.
    #[error("integration produced a non-finite value at t = {t}: {detail}")]
    NonFinite { t: f64, detail: String },

    /// A text document failed to parse; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A document-level problem not tied to a single line
    /// (e.g. a required key never appears).
    #[error("{0}")]
    Document(String),

    /// The dynamic-programming configuration is unusable as given.
    #[error("dp config: {0}")]
    DpConfig(String),
}

impl CrpError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        CrpError::InvalidField { field, reason: reason.into() }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        CrpError::Parse { line, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, CrpError>;
