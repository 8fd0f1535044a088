//! Floating-point scalar abstraction.
//!
//! Every numerical routine in the crate is generic over [`Real`]. The trait
//! also carries optional dense-kernel hooks so that `f64`/`f32` can route
//! large eigendecompositions, SVDs and LU solves to an optimized backend,
//! while any other `Float` type falls back to the in-crate reference kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

use crate::linalg::{EigenDecomposition, Matrix, SingularValueDecomposition};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    /// Convert a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable")
    }

    /// Hermitian eigendecomposition through an optimized backend.
    fn backend_eigh(_a: &Matrix<Self>) -> Option<EigenDecomposition<Self>> {
        None
    }

    /// Thin SVD of a square matrix through an optimized backend.
    fn backend_svd(_a: &Matrix<Self>) -> Option<SingularValueDecomposition<Self>> {
        None
    }

    /// Solve `a x = b` through an optimized backend. `None` also signals a
    /// non-finite result (singular input).
    fn backend_solve(_a: &Matrix<Self>, _b: &[Complex<Self>]) -> Option<Vec<Complex<Self>>> {
        None
    }
}

macro_rules! impl_real_with_faer {
    ($t:ty) => {
        impl Real for $t {
            fn backend_eigh(a: &Matrix<Self>) -> Option<EigenDecomposition<Self>> {
                let n = a.rows();
                if a.is_real() {
                    let m = faer::Mat::<$t>::from_fn(n, n, |i, j| a[(i, j)].re);
                    let evd = m.self_adjoint_eigen(faer::Side::Lower).ok()?;
                    let s = evd.S().column_vector();
                    let u = evd.U();
                    let values = (0..n).map(|i| s[i]).collect();
                    let vectors = Matrix::from_fn(n, n, |i, j| Complex::new(u[(i, j)], 0.0));
                    Some(EigenDecomposition::sorted(values, vectors))
                } else {
                    let m = faer::Mat::<Complex<$t>>::from_fn(n, n, |i, j| a[(i, j)]);
                    let evd = m.self_adjoint_eigen(faer::Side::Lower).ok()?;
                    let s = evd.S().column_vector();
                    let u = evd.U();
                    let values = (0..n).map(|i| s[i].re).collect();
                    let vectors = Matrix::from_fn(n, n, |i, j| u[(i, j)]);
                    Some(EigenDecomposition::sorted(values, vectors))
                }
            }

            fn backend_svd(a: &Matrix<Self>) -> Option<SingularValueDecomposition<Self>> {
                let n = a.rows();
                if a.cols() != n {
                    return None;
                }
                let (values, left, right) = if a.is_real() {
                    let m = faer::Mat::<$t>::from_fn(n, n, |i, j| a[(i, j)].re);
                    let svd = m.svd().ok()?;
                    let s = svd.S().column_vector();
                    let (u, v) = (svd.U(), svd.V());
                    (
                        (0..n).map(|i| s[i]).collect::<Vec<_>>(),
                        Matrix::from_fn(n, n, |i, j| Complex::new(u[(i, j)], 0.0)),
                        Matrix::from_fn(n, n, |i, j| Complex::new(v[(i, j)], 0.0)),
                    )
                } else {
                    let m = faer::Mat::<Complex<$t>>::from_fn(n, n, |i, j| a[(i, j)]);
                    let svd = m.svd().ok()?;
                    let s = svd.S().column_vector();
                    let (u, v) = (svd.U(), svd.V());
                    (
                        (0..n).map(|i| s[i].re).collect::<Vec<_>>(),
                        Matrix::from_fn(n, n, |i, j| u[(i, j)]),
                        Matrix::from_fn(n, n, |i, j| v[(i, j)]),
                    )
                };
                Some(SingularValueDecomposition { values, left, right })
            }

            fn backend_solve(a: &Matrix<Self>, b: &[Complex<Self>]) -> Option<Vec<Complex<Self>>> {
                use faer::linalg::solvers::Solve;
                let n = a.rows();
                let x: Vec<Complex<$t>> = if a.is_real() && b.iter().all(|z| z.im == 0.0) {
                    let m = faer::Mat::<$t>::from_fn(n, n, |i, j| a[(i, j)].re);
                    let rhs = faer::Mat::<$t>::from_fn(n, 1, |i, _| b[i].re);
                    let sol = m.partial_piv_lu().solve(&rhs);
                    (0..n).map(|i| Complex::new(sol[(i, 0)], 0.0)).collect()
                } else {
                    let m = faer::Mat::<Complex<$t>>::from_fn(n, n, |i, j| a[(i, j)]);
                    let rhs = faer::Mat::<Complex<$t>>::from_fn(n, 1, |i, _| b[i]);
                    let sol = m.partial_piv_lu().solve(&rhs);
                    (0..n).map(|i| sol[(i, 0)]).collect()
                };
                x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
            }
        }
    };
}

impl_real_with_faer!(f64);
impl_real_with_faer!(f32);
