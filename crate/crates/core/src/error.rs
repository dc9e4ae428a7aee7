use thiserror::Error;

/// Library-wide error type.
///
/// The variants are grouped by how a front end should report them: argument
/// and precondition problems, size caps, and internal consistency failures
/// (an exactness invariant that did not hold). The CLI maps these onto
/// distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or violated precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two lattices of different ambient dimension were combined.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An interval operation was asked for `[L, M]` with `L` not below `M`.
    #[error("lattice is not contained in the claimed superlattice")]
    NotContained,

    /// Text input could not be parsed as a lattice.
    #[error("parse error: {0}")]
    Parse(String),

    /// Parsed matrix is not in canonical form and canonicalization was not
    /// requested.
    #[error("not in canonical form: {0}")]
    NonCanonical(String),

    /// A configured size cap would be exceeded; raising the cap is the
    /// caller's explicit decision.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Operation is undefined for the requested group.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// An exactness invariant failed; indicates a bug, not bad input.
    #[error("consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
