use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point lies outside the support of a density.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution or construction parameter is out of range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A composition does not sum to the declared order.
    #[error("composition {parts:?} sums to {actual}, expected {expected}")]
    CompositionSum {
        parts: Vec<u32>,
        expected: u32,
        actual: u64,
    },

    /// A half-integer literal could not be parsed.
    #[error("cannot parse half-integer from {0:?}")]
    ParseHalfInteger(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
