use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A digit position or exponent left the supported 62-bit range.
    #[error("position overflow: {0}")]
    Overflow(String),
    #[error("denominator of {value} has a prime factor beyond the first {table} primes")]
    UnsupportedPrime { value: String, table: usize },
    #[error("{value} has no terminating expansion in base P_{base_index}")]
    UnsupportedBase { value: String, base_index: usize },
    #[error("index {index} outside the prime table (1..={max})")]
    PrimeIndex { index: usize, max: usize },
    #[error("unknown colouring `{0}`")]
    UnknownColouring(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search budget exhausted after {nodes} nodes (best depth {best_depth})")]
    BudgetExhausted { nodes: u64, best_depth: usize },
    /// A state the mathematics rules out was reached; always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
