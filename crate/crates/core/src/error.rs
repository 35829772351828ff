use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {n} exceeds the dense limit {limit}")]
    DimensionExceeded { n: usize, limit: usize },
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("argument {x} is outside the filter domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },
    #[error("input is not sorted ascending at index {index}")]
    UnsortedInput { index: usize },
    #[error("‖W‖_F = {norm} exceeds the regularization radius r = {r}")]
    RegularizationViolated { norm: f64, r: f64 },
    #[error("degree mismatch: have {available}, need {required}")]
    DegreeMismatch { available: usize, required: usize },
    #[error("no forward cache available for the backward pass")]
    NoForwardCache,
    #[error("model variant does not match the provided input: {0}")]
    VariantInputMismatch(&'static str),
    #[error("training diverged at epoch {epoch}: loss = {loss}")]
    DivergenceDetected { epoch: usize, loss: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn mismatch(op: &'static str, lhs: (usize, usize), rhs: (usize, usize)) -> Self {
        Error::DimensionMismatch { op, lhs, rhs }
    }
}
