use num_complex::Complex;
use num_traits::Zero;

use super::{GridInfo, LinearProblem};
use crate::linalg::{direct_solve, LinalgError, Matrix};
use crate::Real;

pub const DEFAULT_DIFFUSION: f64 = 0.25;

/// Taylor–Green velocity `(sin x cos y, −cos x sin y)`.
pub fn taylor_green_velocity<T: Real>(x: T, y: T) -> (T, T) {
    (x.sin() * y.cos(), -(x.cos() * y.sin()))
}

/// `v·∇u − D∇²u = D sin x sin y` on the periodic square `[0, 2π)²` with
/// `N²` unknowns, `h = 2π/N`, second-order central differences for both
/// terms, and unknown `(i, j)` at index `i·N + j` (x-major).
///
/// The operator annihilates constants and the right-hand side is mean-free,
/// so the reference is the mean-free solution, obtained from the bordered
/// system `(A + 𝟙𝟙ᵀ/N²)·x = b`.
pub fn advection_diffusion_system<T: Real>(n: usize, diffusion: T) -> Result<LinearProblem<T>, LinalgError> {
    assert!(n >= 3, "advection-diffusion needs at least 3 points per direction");
    let total = n * n;
    let h = T::TAU() / T::from_count(n);
    let coord = |i: usize| T::from_count(i) * h;
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let inv_2h = T::one() / (T::lit(2.0) * h);
    let inv_h2 = T::one() / (h * h);
    let mut a = Matrix::zeros(total, total);
    let mut b = vec![Complex::zero(); total];
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (coord(i), coord(j));
            let (vx, vy) = taylor_green_velocity(x, y);
            let row = idx(i, j);
            let mut add = |col: usize, v: T| a[(row, col)] += Complex::new(v, T::zero());
            add(idx(i + 1, j), vx * inv_2h - diffusion * inv_h2);
            add(idx(i + n - 1, j), -vx * inv_2h - diffusion * inv_h2);
            add(idx(i, j + 1), vy * inv_2h - diffusion * inv_h2);
            add(idx(i, j + n - 1), -vy * inv_2h - diffusion * inv_h2);
            add(row, T::lit(4.0) * diffusion * inv_h2);
            b[row] = Complex::new(diffusion * x.sin() * y.sin(), T::zero());
        }
    }
    let shift = Complex::new(T::one() / T::from_count(total), T::zero());
    let bordered = Matrix::from_fn(total, total, |r, c| a[(r, c)] + shift);
    let reference = direct_solve(&bordered, &b)?;
    Ok(LinearProblem {
        a,
        b,
        reference,
        grid: GridInfo {
            n,
            h: h.to_f64().unwrap_or(f64::NAN),
            domain: "[0,2π)² periodic".into(),
        },
    })
}
