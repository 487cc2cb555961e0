use thiserror::Error;

/// Errors surfaced by the qutrit-bell library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("state coefficients must satisfy a1^2 + a2^2 + a3^2 = 3 (got {sum_sq:.12})")]
    Normalization { sum_sq: f64 },

    #[error("state coefficients must be finite real numbers")]
    NonFinite,

    #[error("cannot normalize the zero vector")]
    ZeroState,

    #[error("a1 = {0} lies outside [-sqrt(3), sqrt(3)]")]
    A1OutOfRange(f64),

    #[error("epsilon = {0} lies outside [0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("outcome index {0} is out of range (expected 1, 2 or 3)")]
    OutcomeIndex(usize),

    #[error("basis vectors are not orthonormal (max deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("threshold noise fraction needs s_max > 0 (got {0})")]
    NonPositiveSMax(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
