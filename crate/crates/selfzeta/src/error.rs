//! Error taxonomy shared by all modules.
//!
//! Numerical routines either deliver a value meeting their stated accuracy
//! contract or report *why* they could not.  The variants map one-to-one onto
//! the failure modes of the pipeline: pole proximity, argument domain,
//! series truncation, quadrature / series convergence, normalization of a
//! density kernel, rejection-sampler envelope degeneracy, and configuration
//! or usage problems surfaced through the CLI.

use std::fmt;

use num_complex::Complex64;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation requested within the pole-exclusion radius of a pole.
    Pole { what: &'static str, at: Complex64 },
    /// Argument outside the domain of the operation.
    Domain { what: &'static str, detail: String },
    /// A series hit its term cap before meeting the tail criterion.
    Truncation { what: &'static str, cap: usize },
    /// An iterative scheme failed to converge to the requested tolerance.
    Convergence { what: &'static str, detail: String },
    /// A quadrature failed to converge or produced a non-finite value.
    Quadrature { what: &'static str, detail: String },
    /// A density kernel could not be normalized (divergent or zero mass).
    Normalization { what: &'static str, detail: String },
    /// A rejection sampler's acceptance rate collapsed.
    Envelope { what: &'static str, acceptance: f64 },
    /// Invalid verification or suite configuration.
    Config { detail: String },
    /// Invalid command line usage (reserved for the CLI front end).
    Usage { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { what, at } => {
                write!(f, "{what}: evaluation within pole-exclusion radius of {at}")
            }
            Error::Domain { what, detail } => write!(f, "{what}: domain error: {detail}"),
            Error::Truncation { what, cap } => {
                write!(f, "{what}: series cap of {cap} terms reached before tail criterion")
            }
            Error::Convergence { what, detail } => {
                write!(f, "{what}: failed to converge: {detail}")
            }
            Error::Quadrature { what, detail } => write!(f, "{what}: quadrature error: {detail}"),
            Error::Normalization { what, detail } => {
                write!(f, "{what}: normalization error: {detail}")
            }
            Error::Envelope { what, acceptance } => {
                write!(f, "{what}: rejection envelope degenerate (acceptance {acceptance:.2e})")
            }
            Error::Config { detail } => write!(f, "configuration error: {detail}"),
            Error::Usage { detail } => write!(f, "usage error: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
