//! Finite-difference test problems.

mod advdiff;
mod burgers;
mod poisson;
mod random;

pub use advdiff::{advection_diffusion_system, taylor_green_velocity, DEFAULT_DIFFUSION};
pub use burgers::{burgers_space_time, BurgersProblem};
pub use poisson::{nonlinear_poisson, PoissonProblem, DEFAULT_FREQUENCY};
pub use random::random_spd_problem;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::linalg::vector::{norm2, to_complex};
use crate::linalg::{LinalgError, Matrix};
use crate::Real;

/// Grid description carried with every problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    /// Points per direction.
    pub n: usize,
    /// Spatial step.
    pub h: f64,
    pub domain: String,
}

/// `A x = b` with a direct-solve reference.
#[derive(Clone, Debug)]
pub struct LinearProblem<T> {
    pub a: Matrix<T>,
    pub b: Vec<Complex<T>>,
    pub reference: Vec<Complex<T>>,
    pub grid: GridInfo,
}

impl<T: Real> LinearProblem<T> {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `‖A·x − b‖₂ / ‖b‖₂`.
    pub fn relative_residual(&self, x: &[Complex<T>]) -> Result<T, LinalgError> {
        let ax = self.a.mul_vec(x)?;
        let r: Vec<_> = ax.iter().zip(&self.b).map(|(p, q)| p - q).collect();
        Ok(norm2(&r) / norm2(&self.b))
    }
}

/// `F(u) = y` with analytic Jacobian.
pub trait NonlinearProblem<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn residual(&self, u: &[T]) -> Vec<T>;

    fn jacobian(&self, u: &[T]) -> Matrix<T>;

    fn initial_guess(&self) -> Vec<T>;

    /// Right-hand side `y`; `None` means zero.
    fn target(&self) -> Option<&[T]> {
        None
    }

    fn grid(&self) -> GridInfo;
}

/// `F(u) = A·u − b` for a real matrix.
#[derive(Clone, Debug)]
pub struct AffineProblem<T> {
    a: Matrix<T>,
    b: Vec<T>,
    u0: Vec<T>,
    grid: GridInfo,
}

impl<T: Real> AffineProblem<T> {
    /// Uses the zero initial guess.
    pub fn new(a: Matrix<T>, b: Vec<T>, grid: GridInfo) -> Result<Self, LinalgError> {
        let n = a.ensure_square()?;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        Ok(Self {
            a,
            b,
            u0: vec![T::zero(); n],
            grid,
        })
    }

    pub fn from_linear(p: &LinearProblem<T>) -> Result<Self, LinalgError> {
        Self::new(p.a.clone(), p.b.iter().map(|z| z.re).collect(), p.grid.clone())
    }

    pub fn with_initial_guess(mut self, u0: Vec<T>) -> Self {
        self.u0 = u0;
        self
    }
}

impl<T: Real> NonlinearProblem<T> for AffineProblem<T> {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn residual(&self, u: &[T]) -> Vec<T> {
        let au = self.a.mul_vec(&to_complex(u)).expect("dimension checked");
        au.iter().zip(&self.b).map(|(z, &bi)| z.re - bi).collect()
    }

    fn jacobian(&self, _u: &[T]) -> Matrix<T> {
        self.a.clone()
    }

    fn initial_guess(&self) -> Vec<T> {
        self.u0.clone()
    }

    fn grid(&self) -> GridInfo {
        self.grid.clone()
    }
}

type ResidualFn<T> = Box<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
type JacobianFn<T> = Box<dyn Fn(&[T]) -> Matrix<T> + Send + Sync>;

/// Problem defined by closures.
pub struct FnProblem<T> {
    dim: usize,
    residual: ResidualFn<T>,
    jacobian: JacobianFn<T>,
    u0: Vec<T>,
    target: Option<Vec<T>>,
}

impl<T: Real> FnProblem<T> {
    pub fn new(
        u0: Vec<T>,
        residual: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
        jacobian: impl Fn(&[T]) -> Matrix<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim: u0.len(),
            residual: Box::new(residual),
            jacobian: Box::new(jacobian),
            u0,
            target: None,
        }
    }

    pub fn with_target(mut self, y: Vec<T>) -> Self {
        self.target = Some(y);
        self
    }
}

impl<T: Real> NonlinearProblem<T> for FnProblem<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn residual(&self, u: &[T]) -> Vec<T> {
        (self.residual)(u)
    }

    fn jacobian(&self, u: &[T]) -> Matrix<T> {
        (self.jacobian)(u)
    }

    fn initial_guess(&self) -> Vec<T> {
        self.u0.clone()
    }

    fn target(&self) -> Option<&[T]> {
        self.target.as_deref()
    }

    fn grid(&self) -> GridInfo {
        GridInfo {
            n: self.dim,
            h: 0.0,
            domain: "user-defined".into(),
        }
    }
}

/// Serializable problem description used in run manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    AdvectionDiffusion { n: usize, diffusion: f64 },
    RandomSpd { n: usize, seed: u64 },
    Poisson { n: usize, frequency: f64 },
    Burgers { n: usize },
}

impl ProblemSpec {
    pub fn is_linear(&self) -> bool {
        matches!(self, ProblemSpec::AdvectionDiffusion { .. } | ProblemSpec::RandomSpd { .. })
    }

    pub fn n(&self) -> usize {
        match *self {
            ProblemSpec::AdvectionDiffusion { n, .. }
            | ProblemSpec::RandomSpd { n, .. }
            | ProblemSpec::Poisson { n, .. }
            | ProblemSpec::Burgers { n } => n,
        }
    }

    /// `None` for nonlinear problems.
    pub fn build_linear<T: Real>(&self) -> Option<Result<LinearProblem<T>, LinalgError>> {
        match *self {
            ProblemSpec::AdvectionDiffusion { n, diffusion } => {
                Some(advection_diffusion_system(n, T::lit(diffusion)))
            }
            ProblemSpec::RandomSpd { n, seed } => Some(random_spd_problem(n, seed)),
            _ => None,
        }
    }

    /// `None` for linear problems.
    pub fn build_nonlinear<T: Real>(&self) -> Option<Box<dyn NonlinearProblem<T>>> {
        match *self {
            ProblemSpec::Poisson { n, frequency } => {
                Some(Box::new(nonlinear_poisson::<T>(n, T::lit(frequency))))
            }
            ProblemSpec::Burgers { n } => Some(Box::new(burgers_space_time::<T>(n))),
            _ => None,
        }
    }
}
