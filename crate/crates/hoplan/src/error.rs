//! Crate-wide error type and the process exit codes the CLI maps it to.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Scenario config failed validation. Each entry is `path: constraint`.
    #[error("invalid config:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    /// A time slot (or decision instant) has no eligible satellite, so no
    /// plan can cover the horizon.
    #[error("coverage gap: {0}")]
    CoverageGap(String),

    /// Malformed input table; `line` is 1-based and counts the header.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A query epoch fell outside the ephemeris table. No extrapolation.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A plan references data the ephemeris does not carry.
    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code contract: 0 success, 1 config/usage error,
    /// 2 coverage gap, 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CoverageGap(_) => 2,
            Error::Io(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
