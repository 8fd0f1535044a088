use num_complex::Complex;

use super::{GridInfo, NonlinearProblem};
use crate::linalg::Matrix;
use crate::Real;

pub const DEFAULT_FREQUENCY: f64 = 10.0;

/// `−Δu = C² cos(Cx) cos(Cy) + u²` on `[0,1]²` with `u = cos(Cx) cos(Cy)` on the boundary.
#[derive(Clone, Debug)]
pub struct PoissonProblem<T> {
    n: usize,
    h: T,
    /// Source `C² cos(Cx) cos(Cy)` minus the folded boundary contributions over `h²`.
    forcing: Vec<T>,
}

/// `N²` interior unknowns at `(i h, j h)`, `i, j = 1..N`, `h = 1/(N+1)`,
/// index `(i−1)·N + (j−1)`; five-point Laplacian with the Dirichlet values
/// moved into the forcing. `F(u) = −Δ_h u − u² − f`, `J_F(u) = −Δ_h − 2 diag(u)`, `u₀ = 0`.
pub fn nonlinear_poisson<T: Real>(n: usize, frequency: T) -> PoissonProblem<T> {
    assert!(n >= 2, "Poisson grid needs at least 2 interior points per direction");
    let h = T::one() / T::from_count(n + 1);
    let c = frequency;
    let boundary = |i: usize, j: usize| {
        let (x, y) = (T::from_count(i) * h, T::from_count(j) * h);
        (c * x).cos() * (c * y).cos()
    };
    let inv_h2 = T::one() / (h * h);
    let mut forcing = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let mut f = c * c * boundary(i, j);
            for (bi, bj) in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
                if bi == 0 || bi == n + 1 || bj == 0 || bj == n + 1 {
                    f += boundary(bi, bj) * inv_h2;
                }
            }
            forcing.push(f);
        }
    }
    PoissonProblem { n, h, forcing }
}

impl<T: Real> PoissonProblem<T> {
    /// `−Δ_h u` on interior values (zero Dirichlet data).
    fn neg_laplacian(&self, u: &[T]) -> Vec<T> {
        let n = self.n;
        let inv_h2 = T::one() / (self.h * self.h);
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = T::lit(4.0) * u[i * n + j];
                if i > 0 {
                    s -= u[(i - 1) * n + j];
                }
                if i + 1 < n {
                    s -= u[(i + 1) * n + j];
                }
                if j > 0 {
                    s -= u[i * n + j - 1];
                }
                if j + 1 < n {
                    s -= u[i * n + j + 1];
                }
                out[i * n + j] = s * inv_h2;
            }
        }
        out
    }
}

impl<T: Real> NonlinearProblem<T> for PoissonProblem<T> {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn residual(&self, u: &[T]) -> Vec<T> {
        self.neg_laplacian(u)
            .into_iter()
            .zip(u)
            .zip(&self.forcing)
            .map(|((l, &ui), &f)| l - ui * ui - f)
            .collect()
    }

    fn jacobian(&self, u: &[T]) -> Matrix<T> {
        let n = self.n;
        let inv_h2 = T::one() / (self.h * self.h);
        let mut j = Matrix::zeros(n * n, n * n);
        let re = |v: T| Complex::new(v, T::zero());
        for a in 0..n {
            for b in 0..n {
                let row = a * n + b;
                j[(row, row)] = re(T::lit(4.0) * inv_h2 - T::lit(2.0) * u[row]);
                if a > 0 {
                    j[(row, row - n)] = re(-inv_h2);
                }
                if a + 1 < n {
                    j[(row, row + n)] = re(-inv_h2);
                }
                if b > 0 {
                    j[(row, row - 1)] = re(-inv_h2);
                }
                if b + 1 < n {
                    j[(row, row + 1)] = re(-inv_h2);
                }
            }
        }
        j
    }

    fn initial_guess(&self) -> Vec<T> {
        vec![T::zero(); self.n * self.n]
    }

    fn grid(&self) -> GridInfo {
        GridInfo {
            n: self.n,
            h: self.h.to_f64().unwrap_or(f64::NAN),
            domain: "[0,1]² Dirichlet".into(),
        }
    }
}
