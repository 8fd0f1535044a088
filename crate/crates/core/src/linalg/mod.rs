//! Dense complex linear algebra shared by the simulator and the model solver.

mod eigen;
mod matrix;
mod solve;
pub mod vector;

pub use eigen::{
    hermitian_eigendecompose, hermitian_eigendecompose_fast, is_orthonormal,
    singular_value_decompose, EigenDecomposition, SingularValueDecomposition, HERMITIAN_TOLERANCE,
    JACOBI_SWEEP_LIMIT,
};
pub use matrix::Matrix;
pub use solve::{direct_solve, lu_solve};

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::Real;

/// Smallest singular value, relative to the largest, still considered invertible.
pub const SINGULAR_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max defect {defect:e})")]
    NonHermitian { defect: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("non-finite entry")]
    NonFinite,
}

/// `e^{iAt} = V·diag(e^{iλt})·V†` for Hermitian `A`.
pub fn matrix_exponential_unitary<T: Real>(a: &Matrix<T>, t: T) -> Result<Matrix<T>, LinalgError> {
    let eig = hermitian_eigendecompose(a)?;
    Ok(unitary_from_eigen(&eig, t))
}

/// `e^{iAt}` from an existing eigendecomposition of `A`.
pub fn unitary_from_eigen<T: Real>(eig: &EigenDecomposition<T>, t: T) -> Matrix<T> {
    eig.apply_function(|l| Complex::from_polar(T::one(), l * t))
}

/// Hermitian dilation `[[0, A], [A†, 0]]` of a square matrix.
pub fn dilate<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let n = a.ensure_square()?;
    Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => Complex::zero(),
    }))
}

/// Singular values of a square matrix, ascending.
pub fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>, LinalgError> {
    a.ensure_square()?;
    let mut s = if a.rows() <= 32 {
        // spectrum of the dilation; exact Jacobi route for small inputs
        hermitian_eigendecompose(&dilate(a)?)?
            .eigenvalues
            .into_iter()
            .filter(|&l| l >= T::zero())
            .collect::<Vec<_>>()
    } else {
        singular_value_decompose(a)?.values
    };
    // the dilation yields ±σ; a zero singular value may show up as ±0
    s.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    if s.len() > a.rows() {
        s.drain(..s.len() - a.rows());
    }
    while s.len() < a.rows() {
        s.insert(0, T::zero());
    }
    Ok(s)
}

/// κ = σ_max / σ_min.
pub fn condition_number<T: Real>(a: &Matrix<T>) -> Result<T, LinalgError> {
    let s = singular_values(a)?;
    let (lo, hi) = match (s.first(), s.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(LinalgError::Singular),
    };
    if hi.is_zero() || lo < T::lit(SINGULAR_TOLERANCE) * hi {
        return Err(LinalgError::Singular);
    }
    Ok(hi / lo)
}
