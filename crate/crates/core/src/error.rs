use thiserror::Error;

use crate::functions::FunctionError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: shape mismatch {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix dimension overflow ({rows} x {cols})")]
    DimensionOverflow { rows: usize, cols: usize },
    #[error("{op}: expected a square matrix, got {rows} x {cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("entry count {len} does not match {rows} x {cols}")]
    BadLength {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("pad target {target} is smaller than the matrix order {order}")]
    PadTooSmall { target: usize, order: usize },
    #[error("matrix is not Hermitian: defect {defect:e} exceeds {allowed:e}")]
    NotHermitian { defect: f64, allowed: f64 },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("{what} = {value} out of range (must be below {limit})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        limit: i64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
}
