use thiserror::Error;

/// Errors produced by weight-lattice and derivation operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad dimensions, bound violations, unparsable entries.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A comparison the operation depends on is not decided by the declared
    /// symbol lower bounds.
    #[error("undecidable under symbol bounds: {0}")]
    Undecidable(String),

    /// An internal invariant failed. Indicates a bug in the pipeline, never a
    /// property of the input; any occurrence is suite-failing.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
