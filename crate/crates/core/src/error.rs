use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact evaluation requested on a simple pole of an amplitude.
    #[error("amplitude evaluated on its pole at Omega = {location}")]
    Pole { location: f64 },

    /// Invalid parameter or configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Unknown mode, channel or pathway label.
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    /// A projective conditioning event that cannot occur for the given state.
    #[error("conditioning event has zero probability: {0}")]
    ZeroProbability(String),
}

pub type Result<T> = std::result::Result<T, Error>;
