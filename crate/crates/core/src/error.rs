//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the numerical operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a stated constraint. The message names it.
    #[error("domain error: {0}")]
    Domain(String),

    /// A finite-difference or inversion result lost too much precision to be
    /// trusted. Carries the estimated error bound.
    #[error("precision error: {msg} (estimated error {bound:.3e})")]
    Precision { msg: String, bound: f64 },

    /// A quadrature or iteration failed to reach its tolerance.
    #[error("numeric error: {msg} (achieved tolerance {achieved:.3e})")]
    Numeric { msg: String, achieved: f64 },

    /// The request is outside what this implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed input data (e.g. a radial spec file).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
