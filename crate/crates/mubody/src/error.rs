//! Error type shared across the crate.

use std::fmt;

/// Errors produced by grid construction, body operations, functionals and
/// transforms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented range.
    InvalidArgument(String),
    /// Two objects that must live on the same grid do not.
    GridMismatch(String),
    /// A surface measure is too degenerate to define a body (e.g. all atoms
    /// on one line through the origin).
    DegenerateMeasure(String),
    /// A computed quantity lost positivity; carries the offending node/atom.
    NumericDegeneracy(String),
    /// Input JSON violates one of the documented schemas.
    Schema(String),
    /// Geometric construction failed (degenerate hull input, origin not
    /// interior, unbounded ray).
    Geometry(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::GridMismatch(m) => write!(f, "grid mismatch: {m}"),
            Error::DegenerateMeasure(m) => write!(f, "degenerate measure: {m}"),
            Error::NumericDegeneracy(m) => write!(f, "numeric degeneracy: {m}"),
            Error::Schema(m) => write!(f, "schema violation: {m}"),
            Error::Geometry(m) => write!(f, "geometry error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
