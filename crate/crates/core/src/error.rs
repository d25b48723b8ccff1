use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter sits on a pole of the quantity being evaluated.
    #[error("pole: {0}")]
    Pole(String),

    /// A parameter is outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A negative power of `i*u_x` hit a grid point where `u_x` vanishes.
    #[error("singular derivative at grid index {index}: |u_x| = {ux_abs:e} <= {delta:e}")]
    Singularity { index: usize, ux_abs: f64, delta: f64 },

    /// The evolved field left the representable range.
    #[error("blow-up at t = {t}: |u| = {max_abs:e} at grid index {index}")]
    BlowUp { t: f64, index: usize, max_abs: f64 },

    #[error("charge index {0} is not one of 1, 2, 3")]
    ChargeIndex(i64),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
