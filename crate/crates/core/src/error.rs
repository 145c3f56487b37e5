use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Arguments violate a precondition of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The configuration is valid but no closed form is implemented for it
    /// (e.g. points on or above the diagonal, non-monotone point sets).
    #[error("unsupported region: {0}")]
    Unsupported(String),

    /// A real-valued formula was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Brute-force enumeration was asked for a size above the configured cap.
    #[error("refusing to enumerate N = {n}: oracle limit is {limit} (set PERMLAB_ORACLE_MAX_N to override)")]
    OracleLimit { n: usize, limit: usize },

    /// Inclusion-exclusion would need more subsets than allowed.
    #[error("refusing inclusion-exclusion over {size} zero-points: limit is {limit}")]
    SubsetLimit { size: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
