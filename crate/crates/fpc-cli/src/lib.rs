//! IO, file formats and experiment orchestration around `fpc-core`: synthetic
//! phantoms, the wavelet-deblurring study, PGM/CSV/JSON emission, and trace
//! validation for the `fpc` command-line tool.

pub mod check;
pub mod experiment;
pub mod export;
pub mod pgm;
pub mod phantom;
pub mod spec;

use std::fmt;

/// Application-level error with the process exit code it maps to:
/// 2 configuration, 3 numerical, 1 IO/other. Exit code 4 (monitor or
/// inequality violation) is not an error value; the subcommands return it
/// explicitly when a check fails.
#[derive(Debug)]
pub enum AppError {
    Core(fpc_core::Error),
    Io(std::io::Error),
    Parse(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(e) => match e {
                fpc_core::Error::Config(_)
                | fpc_core::Error::InvalidParameter { .. }
                | fpc_core::Error::DimensionMismatch { .. } => 2,
                fpc_core::Error::NonFinite { .. }
                | fpc_core::Error::NoConvergence { .. }
                | fpc_core::Error::Divergence { .. }
                | fpc_core::Error::CurveSolve { .. } => 3,
            },
            AppError::Io(_) => 1,
            AppError::Parse(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "io error: {e}"),
            AppError::Parse(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<fpc_core::Error> for AppError {
    fn from(e: fpc_core::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Parse(format!("json error: {e}"))
    }
}
