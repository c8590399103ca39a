use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Validation(String),

    #[error("Stirling coefficient c(j, {n}) overflows 128-bit integers; allele multiplicity too large")]
    StirlingOverflow { n: usize },

    #[error("enumeration of {count} joint genotypes exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },

    /// Raised when an engine result violates a normalization invariant.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for failures caused by the engine rather than by user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }
}
