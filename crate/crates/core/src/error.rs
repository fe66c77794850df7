//! Error type shared across the crate.

use std::fmt;

/// Errors produced by matrix operations, bracket evaluation and I/O.
#[derive(Debug)]
pub enum Error {
    /// Operands have different dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix entry is NaN or infinite.
    NonFinite { context: &'static str },
    /// A factorization or inversion hit a pivot below the singularity threshold.
    NearSingular { pivot: f64, threshold: f64 },
    /// Data length does not match the declared dimension.
    InvalidData { expected: usize, got: usize },
    /// A configuration value is out of its allowed range.
    InvalidConfig(String),
    /// A point violates a subspace membership precondition.
    OutsideSubspace { deviation: f64, tolerance: f64 },
    /// An eigenvalue iteration failed to converge.
    NoConvergence { iterations: usize },
    /// Time integration produced a non-finite state.
    Diverged { t: f64 },
    /// A requested bracket is undefined for the given selector.
    InvalidBracket(String),
    /// Malformed textual input (field descriptors, CSV, JSON).
    Parse(String),
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected n={expected}, got n={got}")
            }
            Error::NonFinite { context } => write!(f, "non-finite value in {context}"),
            Error::NearSingular { pivot, threshold } => write!(
                f,
                "matrix is singular or near-singular: pivot {pivot:e} below threshold {threshold:e}"
            ),
            Error::InvalidData { expected, got } => {
                write!(
                    f,
                    "data length mismatch: expected {expected} entries, got {got}"
                )
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::OutsideSubspace {
                deviation,
                tolerance,
            } => write!(
                f,
                "point lies outside the subspace: deviation {deviation:e} exceeds {tolerance:e}"
            ),
            Error::NoConvergence { iterations } => {
                write!(
                    f,
                    "eigenvalue iteration did not converge after {iterations} sweeps"
                )
            }
            Error::Diverged { t } => write!(f, "integration produced a non-finite state at t={t}"),
            Error::InvalidBracket(msg) => write!(f, "invalid bracket selector: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
