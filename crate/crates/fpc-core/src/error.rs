//! Error type shared by the whole crate.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must agree in dimension do not.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A parameter is outside its admissible range.
    InvalidParameter {
        context: &'static str,
        message: String,
    },
    /// A vector entry became NaN or infinite.
    NonFinite {
        context: &'static str,
        index: usize,
    },
    /// An iterative estimate did not converge; carries the last estimate.
    NoConvergence {
        context: &'static str,
        iterations: usize,
        last_estimate: f64,
    },
    /// The objective blew up during a solve.
    Divergence { iteration: usize, objective: f64 },
    /// A solve was rejected before iterating.
    Config(String),
    /// A member solve of a trade-off-curve grid failed at the named penalty.
    CurveSolve { lambda: f64, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {context}: expected {expected}, found {found}"
            ),
            Error::InvalidParameter { context, message } => {
                write!(f, "invalid parameter in {context}: {message}")
            }
            Error::NonFinite { context, index } => {
                write!(f, "non-finite value in {context} at index {index}")
            }
            Error::NoConvergence {
                context,
                iterations,
                last_estimate,
            } => write!(
                f,
                "{context} did not converge within {iterations} iterations (last estimate {last_estimate})"
            ),
            Error::Divergence {
                iteration,
                objective,
            } => write!(
                f,
                "objective diverged at iteration {iteration} (value {objective})"
            ),
            Error::Config(message) => write!(f, "configuration error: {message}"),
            Error::CurveSolve { lambda, message } => {
                write!(f, "curve solve failed at lambda = {lambda}: {message}")
            }
        }
    }
}

impl core::error::Error for Error {}
