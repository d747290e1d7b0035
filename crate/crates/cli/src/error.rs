use std::path::PathBuf;

use serde_json::json;
use spectral_polytope::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("output error: {0}")]
    Output(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 for usage, input and cap errors; 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::Infeasible(_)
                | CoreError::NoConvergence { .. }
                | CoreError::DegenerateBoundary { .. }
                | CoreError::DegenerateHull(_)
                | CoreError::Interpolation(_)
                | CoreError::LpUnbounded => 1,
                _ => 2,
            },
            CliError::Output(_) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                CoreError::InvalidDims(_) => "invalid_dims",
                CoreError::InvalidConfiguration(_) => "invalid_configuration",
                CoreError::DimensionMismatch { .. } => "dimension_mismatch",
                CoreError::CapacityExceeded { .. } => "capacity_exceeded",
                CoreError::InvalidWeights(_) => "invalid_weights",
                CoreError::SumMismatch { .. } => "sum_mismatch",
                CoreError::Normalization { .. } => "normalization",
                CoreError::LpUnbounded => "lp_unbounded",
                CoreError::DegenerateHull(_) => "degenerate_hull",
                CoreError::Interpolation(_) => "interpolation",
                CoreError::NotHermitian(_) => "not_hermitian",
                CoreError::InvalidOperator(_) => "invalid_operator",
                CoreError::DegenerateBoundary { .. } => "degenerate_boundary",
                CoreError::Infeasible(_) => "infeasible",
                CoreError::NoConvergence { .. } => "no_convergence",
            },
            CliError::Usage(_) => "usage",
            CliError::Read { .. } => "io",
            CliError::Json { .. } => "malformed_input",
            CliError::Output(_) => "output",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "error": { "kind": self.kind(), "message": self.to_string() },
        })
    }
}
