//! Error type shared by all modules.

/// Failure modes surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix or vector dimensions do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// A subsystem label is missing, duplicated, or otherwise unusable.
    #[error("label error: {0}")]
    Label(String),

    /// A constructed state violates a density-operator or normalization
    /// invariant.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A scalar parameter lies outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration input (table text, sweep grid, qubit count) is
    /// malformed.
    #[error("config error: {0}")]
    Config(String),

    /// Random sampling was asked to draw from an empty or fully degenerate
    /// distribution.
    #[error("sampling error: {0}")]
    Sampling(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
