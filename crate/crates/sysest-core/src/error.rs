//! Error type shared by the whole crate.

use core::fmt;

/// Errors reported by population construction, theory evaluation, and the
/// simulator.
///
/// The variants are grouped so that callers can map them onto coarse exit
/// categories: everything except [`Error::Degenerate`] describes a problem
/// with the supplied data or parameters; `Degenerate` signals that the
/// numbers themselves defeated an otherwise well-posed computation
/// (zero variance where a ratio is needed, a singular weight system, and so
/// on).
#[derive(Debug, Clone, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    /// The population holds no units.
    EmptyPopulation,
    /// `y` and `x` differ in length.
    LengthMismatch {
        /// Number of `y` values supplied.
        y_len: usize,
        /// Number of `x` values supplied.
        x_len: usize,
    },
    /// A value that must be finite was `NaN` or infinite.
    NonFinite(&'static str),
    /// The population size is not a multiple of the sample size.
    IndivisibleDesign {
        /// Population size `N`.
        n_units: usize,
        /// Requested systematic sample size `n`.
        sample_size: usize,
    },
    /// A parameter lies outside its admissible range.
    InvalidParameter(&'static str),
    /// A computation became numerically degenerate.
    Degenerate(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPopulation => write!(f, "population is empty"),
            Error::LengthMismatch { y_len, x_len } => {
                write!(f, "y has {y_len} values but x has {x_len}")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::IndivisibleDesign {
                n_units,
                sample_size,
            } => write!(
                f,
                "population size {n_units} is not a multiple of sample size {sample_size}"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Degenerate(what) => write!(f, "numerically degenerate: {what}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
