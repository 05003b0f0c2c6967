//! Error type shared by all numeric modules.

use std::fmt;

/// Errors raised by the numeric pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Dimensions of the operands do not line up; the message names both shapes.
    Shape(String),
    /// An input is outside the operation's domain (e.g. all-zero image, scatterer
    /// beyond the unambiguous extent, non-power-of-two FFT length).
    Domain(String),
    /// A computation produced a non-finite value.
    Numeric(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
