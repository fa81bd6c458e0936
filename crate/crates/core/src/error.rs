use std::fmt;

use num_bigint::BigUint;

/// A malformed textual spec (sequence, forbidden set, index set, rational).
///
/// `position` is a 0-based byte offset into `input`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at position {} in {:?}",
            self.message, self.position, self.input
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent inputs: radix mismatch, quotient beyond a finite sequence, invalid digit set.
    #[error("structural error: {0}")]
    Structural(String),

    /// The bound machinery only holds for bounded quotients and 0 <= lambda < 1/d.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("resource error: g_m = {g_m} exceeds the enumeration budget {budget}")]
    Budget { g_m: BigUint, budget: u64 },

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside_regime(what: impl fmt::Display) -> Self {
        Error::Regime(format!(
            "{what}; the bounds require quotients bounded by d and 0 <= lambda < 1/d \
             (convergence for lambda >= 1/d and unbounded quotients is an open problem)"
        ))
    }
}
