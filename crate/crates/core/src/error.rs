use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is missing, malformed or violates a constraint.
    #[error("config error in `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// Two objects bound to different grids were combined, or a buffer has the wrong size.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A function was evaluated outside its domain (nonpositive density, q outside range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Too few samples or a missing derivative.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The time integrator refused to continue (CFL or density floor violation).
    #[error("numerical abort: {0}")]
    NumericalAbort(String),

    /// A snapshot file is malformed, truncated or belongs to another configuration.
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Process exit status used by the `nsk` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalAbort(_) => 1,
            Error::Config { .. } | Error::GridMismatch(_) | Error::Domain(_) => 2,
            Error::InsufficientData(_) => 2,
            Error::Format(_) | Error::Io(_) => 3,
        }
    }
}
