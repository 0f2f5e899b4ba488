//! Application error type with a fixed exit-code contract.

use std::fmt;

/// Errors surfaced to the command-line user.
///
/// Each variant owns one process exit code: `1` for usage problems (bad
/// flags, inadmissible parameter values, contradictory option combinations),
/// `2` for data problems (unreadable files, malformed rows, structurally
/// unusable populations), and `3` for numeric degeneracy (configurations
/// whose arithmetic has no answer, like a singular weight system).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppError {
    /// The invocation itself is wrong; exit code 1.
    Usage(String),
    /// The input data cannot be used; exit code 2.
    Data(String),
    /// The computation is numerically degenerate; exit code 3.
    Numeric(String),
}

impl AppError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
            AppError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Data(m) | AppError::Numeric(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for AppError {}

impl From<sysest_core::Error> for AppError {
    fn from(e: sysest_core::Error) -> Self {
        match e {
            sysest_core::Error::InvalidParameter(_) => AppError::Usage(e.to_string()),
            sysest_core::Error::Degenerate(_) => AppError::Numeric(e.to_string()),
            _ => AppError::Data(e.to_string()),
        }
    }
}

/// Result alias for command-line operations.
pub type Result<T> = std::result::Result<T, AppError>;
