use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("capacity exceeded: {what} = {value} exceeds cap {cap}")]
    CapacityExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("vector sums differ: {left} vs {right}")]
    SumMismatch { left: f64, right: f64 },

    #[error("occupation vector not normalized: sum {sum}, expected {expected}")]
    Normalization { sum: f64, expected: f64 },

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("facet interpolation inconsistent: {0}")]
    Interpolation(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error(
        "degenerate spectrum at the ensemble boundary: E[{r}] = {e_r}, E[{next}] = {e_next}",
        next = r + 1
    )]
    DegenerateBoundary { r: usize, e_r: f64, e_next: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e}, gap {gap:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        gap: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
