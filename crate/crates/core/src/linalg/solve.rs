use num_complex::Complex;
use num_traits::Zero;

use super::vector::norm2;
use super::{LinalgError, Matrix, SINGULAR_TOLERANCE};
use crate::Real;

/// Gaussian elimination with partial pivoting.
pub fn lu_solve<T: Real>(a: &Matrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>, LinalgError> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let scale = a.max_abs();
    if scale.is_zero() {
        return Err(LinalgError::Singular);
    }
    let tiny = scale * T::lit(SINGULAR_TOLERANCE);
    let mut m: Vec<Complex<T>> = a.data().to_vec();
    let mut x = b.to_vec();

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i * n + col]
                    .norm()
                    .partial_cmp(&m[j * n + col].norm())
                    .expect("finite")
            })
            .expect("non-empty range");
        if m[pivot * n + col].norm() <= tiny {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            x.swap(pivot, col);
        }
        let inv = Complex::new(T::one(), T::zero()) / m[col * n + col];
        for row in (col + 1)..n {
            let f = m[row * n + col] * inv;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[row * n + k] -= f * v;
            }
            let xc = x[col];
            x[row] -= f * xc;
        }
    }
    for row in (0..n).rev() {
        let mut acc = x[row];
        for k in (row + 1)..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Ok(x)
}

/// Dense direct solve; uses the scalar backend when available.
pub fn direct_solve<T: Real>(a: &Matrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>, LinalgError> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if n > 32 {
        if let Some(x) = T::backend_solve(a, b) {
            // the backend does not report singularity; reject blown-up solutions
            let ax = a.mul_vec(&x)?;
            let res = norm2(&ax.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>());
            let bound = T::epsilon().sqrt() * (a.frobenius_norm() * norm2(&x) + norm2(b));
            if res <= bound {
                return Ok(x);
            }
            return Err(LinalgError::Singular);
        }
    }
    lu_solve(a, b)
}
