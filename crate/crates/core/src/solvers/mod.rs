//! Newton driver with pluggable inner linear solvers.

mod gauss_seidel;
mod newton;

pub use gauss_seidel::gauss_seidel;
pub use newton::{
    newton_solve, solve_linear, ConvergenceRecord, IterationEntry, LinearDiagnostics, LinearSolverKind,
    NewtonResult, StopCriteria, StopReason,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::qlss::QlssError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Qlss(#[from] QlssError),
    #[error("invalid stop criteria: {0}")]
    InvalidCriteria(String),
}
