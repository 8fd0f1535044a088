use num_complex::Complex;

use super::{GridInfo, NonlinearProblem};
use crate::linalg::Matrix;
use crate::Real;

/// Inviscid Burgers `u_t + u u_x = 0` on `x ∈ [0,1]`, `t ∈ [0, 0.5]`,
/// `u(x,0) = sin 2πx`, `u(0,t) = u(1,t) = 0`, solved as one space-time system.
#[derive(Clone, Debug)]
pub struct BurgersProblem<T> {
    n: usize,
    h: T,
    dt: T,
    initial: Vec<T>,
}

/// Unknowns `u_i^j` at `x_i = i/(N+1)`, `t_j = j·Δt` for `i, j = 1..N`,
/// `Δt = 0.5/N`, index `(j−1)·N + (i−1)` (time-major). Backward Euler in
/// time; the advective term uses a backward difference where `u_i^j ≥ 0`
/// and a forward difference where it is negative. `u₀` repeats the
/// initial condition on every time level.
pub fn burgers_space_time<T: Real>(n: usize) -> BurgersProblem<T> {
    assert!(n >= 2, "Burgers grid needs at least 2 points per direction");
    let h = T::one() / T::from_count(n + 1);
    let dt = T::lit(0.5) / T::from_count(n);
    let initial = (1..=n)
        .map(|i| (T::TAU() * T::from_count(i) * h).sin())
        .collect();
    BurgersProblem { n, h, dt, initial }
}

impl<T: Real> BurgersProblem<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn initial_condition(&self) -> &[T] {
        &self.initial
    }

    /// Values at time level `j` (0 is the initial condition).
    pub fn level<'a>(&'a self, u: &'a [T], j: usize) -> &'a [T] {
        if j == 0 {
            &self.initial
        } else {
            &u[(j - 1) * self.n..j * self.n]
        }
    }
}

impl<T: Real> NonlinearProblem<T> for BurgersProblem<T> {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn residual(&self, u: &[T]) -> Vec<T> {
        let n = self.n;
        let mut f = Vec::with_capacity(n * n);
        for j in 1..=n {
            let cur = self.level(u, j);
            let prev = self.level(u, j - 1);
            for i in 0..n {
                let ui = cur[i];
                let left = if i > 0 { cur[i - 1] } else { T::zero() };
                let right = if i + 1 < n { cur[i + 1] } else { T::zero() };
                let grad = if ui >= T::zero() {
                    (ui - left) / self.h
                } else {
                    (right - ui) / self.h
                };
                f.push((ui - prev[i]) / self.dt + ui * grad);
            }
        }
        f
    }

    fn jacobian(&self, u: &[T]) -> Matrix<T> {
        let n = self.n;
        let mut jac = Matrix::zeros(n * n, n * n);
        let re = |v: T| Complex::new(v, T::zero());
        let inv_dt = T::one() / self.dt;
        for j in 1..=n {
            let cur = self.level(u, j);
            let base = (j - 1) * n;
            for i in 0..n {
                let row = base + i;
                let ui = cur[i];
                let left = if i > 0 { cur[i - 1] } else { T::zero() };
                let right = if i + 1 < n { cur[i + 1] } else { T::zero() };
                if ui >= T::zero() {
                    jac[(row, row)] = re(inv_dt + (T::lit(2.0) * ui - left) / self.h);
                    if i > 0 {
                        jac[(row, row - 1)] = re(-ui / self.h);
                    }
                } else {
                    jac[(row, row)] = re(inv_dt + (right - T::lit(2.0) * ui) / self.h);
                    if i + 1 < n {
                        jac[(row, row + 1)] = re(ui / self.h);
                    }
                }
                if j > 1 {
                    jac[(row, row - n)] = re(-inv_dt);
                }
            }
        }
        jac
    }

    fn initial_guess(&self) -> Vec<T> {
        (0..self.n).flat_map(|_| self.initial.iter().copied()).collect()
    }

    fn grid(&self) -> GridInfo {
        GridInfo {
            n: self.n,
            h: self.h.to_f64().unwrap_or(f64::NAN),
            domain: "[0,1]×[0,0.5] space-time".into(),
        }
    }
}
