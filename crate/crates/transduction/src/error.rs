use thiserror::Error;

/// Errors produced by state construction and channel/teleportation operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor argument violates its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation precondition on otherwise valid inputs is not met.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched vector/matrix/grid dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An internal consistency check failed; indicates a bug or an
    /// unphysical intermediate, not a caller error.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
