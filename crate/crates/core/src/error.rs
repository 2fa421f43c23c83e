use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid matrix: determinant {det} is not 1 within {tol}")]
    InvalidMatrix { det: f64, tol: f64 },

    #[error("dimension mismatch: expected k = {expected}, got k = {found}")]
    Dimension { expected: usize, found: usize },

    #[error("reduction did not terminate after {steps} generator applications")]
    ReductionFailure {
        steps: usize,
        word: Vec<crate::geometry::Generator>,
    },

    #[error("lattice sum truncation exceeded its budget: achieved tail bound {achieved:e}")]
    Truncation { achieved: f64 },

    #[error("rotation phi = {phi} is not supported for the {cutoff} cut-off")]
    UnsupportedRotation { cutoff: &'static str, phi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
