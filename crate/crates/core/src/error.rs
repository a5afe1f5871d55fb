use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has no coefficients")]
    Empty,
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("degree {degree} not allowed here: {reason}")]
    Degree { degree: usize, reason: &'static str },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("root iteration did not converge after {iterations} sweeps (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
    },
    #[error("quadrature grid cap of {cap} points exceeded in {what}")]
    GridCap { what: &'static str, cap: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
