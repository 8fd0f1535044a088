use num_complex::Complex;
use num_traits::Zero;

use super::SolverError;
use crate::linalg::{LinalgError, Matrix};
use crate::Real;

/// Exactly `iterations` forward Gauss–Seidel sweeps from `x0`.
pub fn gauss_seidel<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    x0: &[Complex<T>],
    iterations: usize,
) -> Result<Vec<Complex<T>>, SolverError> {
    let n = a.ensure_square()?;
    for len in [b.len(), x0.len()] {
        if len != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: len,
            }
            .into());
        }
    }
    if let Some(row) = (0..n).find(|&i| a[(i, i)].is_zero()) {
        return Err(SolverError::ZeroDiagonal { row });
    }
    let mut x = x0.to_vec();
    for _ in 0..iterations {
        for i in 0..n {
            let row = a.row(i);
            let mut acc = b[i];
            for (j, (&aij, &xj)) in row.iter().zip(&x).enumerate() {
                if j != i {
                    acc -= aij * xj;
                }
            }
            x[i] = acc / row[i];
        }
    }
    Ok(x)
}
