use alloc::string::String;

/// Crate-wide error type.
///
/// Variants mirror the failure classes surfaced by the CLI: contract and
/// domain errors come from malformed inputs, `Divergent` flags points where
/// the QFI has no finite value (e.g. noiseless endpoints), and the
/// convergence variants report iterative methods that ran out of budget.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violated a documented precondition (dimensions, Hermiticity,
    /// normalization, positivity).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A parameter fell outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method failed to converge within its cap.
    #[error("convergence failure: {0}")]
    Convergence(String),
    /// The QFI is not finite at the requested point.
    #[error("divergent QFI: {0}")]
    Divergent(String),
    /// A root bracket could not be established for the named curve pair.
    #[error("bracket failure: {0}")]
    Bracket(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
