//! Error type shared by every stage.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {n} exceeds supported maximum {max}")]
    UnsupportedDegree { n: usize, max: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("index {index} outside window [{lo}, {hi}]")]
    Range { index: i64, lo: i64, hi: i64 },

    #[error("root finder did not converge in {iterations} iterations (max residual {max_residual:e})")]
    RootNonConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
        max_residual: f64,
    },

    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    #[error("Hankel system numerically singular (condition {kappa:e})")]
    IllPosed { kappa: f64 },

    #[error("estimate rejected: {0}")]
    Accuracy(String),

    #[error("localization infeasible: {0}")]
    Localization(String),

    #[error("jump matching failed: {0}")]
    Matching(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
        /// Coarse locations available when the failure happened.
        partial_xis: Vec<f64>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code: 2 for bad input or configuration, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::Parse(_) | Error::UnsupportedDegree { .. } => 2,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 1,
        }
    }

    pub(crate) fn at(self, stage: &'static str, partial_xis: Vec<f64>) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
            partial_xis,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
