use num_complex::Complex;
use num_traits::Zero;

use super::{LinalgError, Matrix};
use crate::Real;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_SWEEP_LIMIT: usize = 100;

/// Relative tolerance on `‖A − A†‖_max / ‖A‖_max` accepted as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    /// Sort the pairs ascending by eigenvalue.
    pub fn sorted(values: Vec<T>, vectors: Matrix<T>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite eigenvalues"));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = Matrix::from_fn(vectors.rows(), n, |r, c| vectors[(r, order[c])]);
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn apply_function(&self, f: impl Fn(T) -> Complex<T>) -> Matrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                let vik = v[(i, k)] * weights[k];
                if vik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.apply_function(|l| Complex::new(l, T::zero()))
    }

    /// Coefficients ⟨v_i, x⟩ of `x` in the eigenbasis.
    pub fn coefficients(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        let mut out = vec![Complex::zero(); n];
        for (i, &xi) in x.iter().enumerate().take(n) {
            for (o, vik) in out.iter_mut().zip(self.eigenvectors.row(i)) {
                *o += vik.conj() * xi;
            }
        }
        out
    }

    /// Σ_i w_i · v_i.
    pub fn combine(&self, weights: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim())
            .map(|i| {
                self.eigenvectors
                    .row(i)
                    .iter()
                    .zip(weights)
                    .fold(Complex::zero(), |acc, (v, &w)| acc + v * w)
            })
            .collect()
    }
}

/// Thin SVD `A = U · diag(σ) · V†` of a square matrix.
#[derive(Clone, Debug)]
pub struct SingularValueDecomposition<T> {
    pub values: Vec<T>,
    pub left: Matrix<T>,
    pub right: Matrix<T>,
}

fn check_hermitian<T: Real>(a: &Matrix<T>) -> Result<usize, LinalgError> {
    let n = a.ensure_square()?;
    let defect = a.hermitian_defect();
    let scale = a.max_abs();
    if defect > T::lit(HERMITIAN_TOLERANCE) * scale {
        return Err(LinalgError::NonHermitian {
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(n)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary and
/// then applies the real symmetric Jacobi rotation. Sweeps stop once the
/// off-diagonal Frobenius mass drops below `1e-14·‖A‖_F` (or a few ulps for
/// lower-precision scalars).
pub fn hermitian_eigendecompose<T: Real>(a: &Matrix<T>) -> Result<EigenDecomposition<T>, LinalgError> {
    let n = check_hermitian(a)?;
    let mut w = a.clone();
    // symmetrize exactly so the rotations see a true Hermitian matrix
    for i in 0..n {
        w[(i, i)] = Complex::new(w[(i, i)].re, T::zero());
        for j in (i + 1)..n {
            let avg = (w[(i, j)] + w[(j, i)].conj()) * T::lit(0.5);
            w[(i, j)] = avg;
            w[(j, i)] = avg.conj();
        }
    }
    let mut v = Matrix::<T>::identity(n);
    let norm = w.frobenius_norm();
    let tol = norm * T::lit(1e-14).max(T::epsilon() * T::lit(4.0));

    let off_norm = |w: &Matrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += w[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while n > 1 && !norm.is_zero() {
        if off_norm(&w) <= tol {
            break;
        }
        if sweeps == JACOBI_SWEEP_LIMIT {
            return Err(LinalgError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }

    let values = (0..n).map(|i| w[(i, i)].re).collect();
    Ok(EigenDecomposition::sorted(values, v))
}

fn rotate<T: Real>(w: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let n = w.rows();
    let z = w[(p, q)];
    let r = z.norm();
    if r.is_zero() {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let phase = z / r; // e^{iφ}
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sign = if theta < T::zero() { -T::one() } else { T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let u00 = Complex::new(c, T::zero());
    let u01 = Complex::new(s, T::zero());
    let u10 = -phase.conj() * s;
    let u11 = phase.conj() * c;

    for k in 0..n {
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        w[(k, p)] = akp * u00 + akq * u10;
        w[(k, q)] = akp * u01 + akq * u11;
    }
    for k in 0..n {
        let apk = w[(p, k)];
        let aqk = w[(q, k)];
        w[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
        w[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u00 + vkq * u10;
        v[(k, q)] = vkp * u01 + vkq * u11;
    }
    w[(p, p)] = Complex::new(app - t * r, T::zero());
    w[(q, q)] = Complex::new(aqq + t * r, T::zero());
    w[(p, q)] = Complex::zero();
    w[(q, p)] = Complex::zero();
}

/// Same contract as [`hermitian_eigendecompose`], routed to the scalar's
/// optimized backend when it has one.
pub fn hermitian_eigendecompose_fast<T: Real>(
    a: &Matrix<T>,
) -> Result<EigenDecomposition<T>, LinalgError> {
    check_hermitian(a)?;
    match T::backend_eigh(a) {
        Some(e) => Ok(e),
        None => hermitian_eigendecompose(a),
    }
}

/// Singular value decomposition of a square matrix.
///
/// Without a backend this goes through the Jacobi eigendecomposition of
/// `A†A` for the right vectors and recovers `U = A V Σ⁻¹`; only use that path
/// at desk scale.
pub fn singular_value_decompose<T: Real>(
    a: &Matrix<T>,
) -> Result<SingularValueDecomposition<T>, LinalgError> {
    let n = a.ensure_square()?;
    if let Some(svd) = T::backend_svd(a) {
        return Ok(svd);
    }
    let gram = a.adjoint().matmul(a)?;
    let eig = hermitian_eigendecompose(&gram)?;
    let av = a.matmul(&eig.eigenvectors)?;
    let mut values = Vec::with_capacity(n);
    let mut left = Matrix::zeros(n, n);
    for k in 0..n {
        let sigma = eig.eigenvalues[k].max(T::zero()).sqrt();
        values.push(sigma);
        if sigma > T::epsilon() {
            for i in 0..n {
                left[(i, k)] = av[(i, k)] / sigma;
            }
        }
    }
    Ok(SingularValueDecomposition {
        values,
        left,
        right: eig.eigenvectors,
    })
}

/// `true` when `V†V` is the identity within `tol` (max-norm).
pub fn is_orthonormal<T: Real>(v: &Matrix<T>, tol: T) -> bool {
    match v.adjoint().matmul(v) {
        Ok(g) => {
            let id = Matrix::<T>::identity(v.cols());
            g.sub(&id).map(|d| d.max_abs() <= tol).unwrap_or(false)
        }
        Err(_) => false,
    }
}
