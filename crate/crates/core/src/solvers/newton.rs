use std::fmt;
use std::time::Instant;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{gauss_seidel, SolverError};
use crate::linalg::vector::{real_norm2, to_complex};
use crate::linalg::{direct_solve, Matrix};
use crate::model::model_qlss_solve;
use crate::pde::NonlinearProblem;
use crate::qlss::{run_qlss, QlssConfig};
use crate::Real;

/// Inner solver for `J·Δu = −F + y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LinearSolverKind {
    Direct,
    /// Fixed number of sweeps from the zero vector.
    GaussSeidel { sweeps: usize },
    Model(QlssConfig),
    Gate(QlssConfig),
}

impl LinearSolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            LinearSolverKind::Direct => "direct",
            LinearSolverKind::GaussSeidel { .. } => "gauss-seidel",
            LinearSolverKind::Model(_) => "model",
            LinearSolverKind::Gate(_) => "gate",
        }
    }
}

/// What the inner solver reported for one solve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearDiagnostics {
    pub success_probability: Option<f64>,
    pub prescale: Option<f64>,
    pub condition_number: Option<f64>,
    pub postselect_attempts: Option<u64>,
}

impl fmt::Display for LinearDiagnostics {
    /// `key=value` pairs joined by `;`, omitting absent values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(p) = self.success_probability {
            parts.push(format!("p={p:.16e}"));
        }
        if let Some(s) = self.prescale {
            parts.push(format!("s={s:.16e}"));
        }
        if let Some(k) = self.condition_number {
            parts.push(format!("kappa={k:.16e}"));
        }
        if let Some(a) = self.postselect_attempts {
            parts.push(format!("attempts={a}"));
        }
        f.write_str(&parts.join(";"))
    }
}

/// Solve `a·x = b` with the chosen method. QLSS solutions are rescaled to the
/// original magnitude by the solver itself.
pub fn solve_linear<T: Real>(
    kind: &LinearSolverKind,
    a: &Matrix<T>,
    b: &[Complex<T>],
) -> Result<(Vec<Complex<T>>, LinearDiagnostics), SolverError> {
    let f = |x: T| x.to_f64();
    match kind {
        LinearSolverKind::Direct => Ok((direct_solve(a, b)?, LinearDiagnostics::default())),
        LinearSolverKind::GaussSeidel { sweeps } => {
            let x0 = vec![Complex::zero(); b.len()];
            Ok((gauss_seidel(a, b, &x0, *sweeps)?, LinearDiagnostics::default()))
        }
        LinearSolverKind::Model(cfg) | LinearSolverKind::Gate(cfg) => {
            let r = if matches!(kind, LinearSolverKind::Model(_)) {
                model_qlss_solve(a, b, cfg)?
            } else {
                run_qlss(a, b, cfg)?
            };
            let diag = LinearDiagnostics {
                success_probability: f(r.success_probability),
                prescale: Some(r.diagnostics.prescale),
                condition_number: r.diagnostics.condition_number,
                postselect_attempts: r.postselect_attempts,
            };
            Ok((r.solution, diag))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopCriteria {
    /// Stop once `‖F(u) − y‖₂ < threshold`.
    pub threshold: f64,
    pub max_iterations: usize,
    /// Residuals above this (or non-finite) count as divergence.
    pub divergence_guard: f64,
}

impl StopCriteria {
    pub const DEFAULT_MAX_ITERATIONS: usize = 100;
    pub const DEFAULT_DIVERGENCE_GUARD: f64 = 1e12;

    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            divergence_guard: Self::DEFAULT_DIVERGENCE_GUARD,
        }
    }

    pub fn with_max_iterations(mut self, max: usize) -> Self {
        self.max_iterations = max;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.threshold > 0.0) {
            return Err(SolverError::InvalidCriteria("threshold must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidCriteria("max iterations must be at least 1".into()));
        }
        if !(self.divergence_guard > self.threshold) {
            return Err(SolverError::InvalidCriteria(
                "divergence guard must exceed the threshold".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    ThresholdReached,
    MaxIterations,
    Diverged,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ThresholdReached => "threshold reached",
            StopReason::MaxIterations => "max iterations",
            StopReason::Diverged => "diverged",
        }
    }
}

/// One Newton iterate: its residual and, unless it is the last one, the
/// linear solve performed from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationEntry {
    pub iteration: usize,
    pub residual: f64,
    pub diagnostics: Option<LinearDiagnostics>,
    /// Wall-clock time of the linear solve.
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub entries: Vec<IterationEntry>,
    pub stop_reason: StopReason,
    /// Iteration and message of a failed linear solve.
    pub failure: Option<(usize, String)>,
}

impl ConvergenceRecord {
    /// Newton steps taken.
    pub fn iterations(&self) -> usize {
        self.entries.last().map_or(0, |e| e.iteration)
    }

    pub fn final_residual(&self) -> f64 {
        self.entries.last().map_or(f64::NAN, |e| e.residual)
    }

    /// First iteration whose residual is below `threshold`.
    pub fn iterations_to(&self, threshold: f64) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.residual < threshold)
            .map(|e| e.iteration)
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.residual).collect()
    }
}

#[derive(Clone, Debug)]
pub struct NewtonResult<T> {
    pub u: Vec<T>,
    pub record: ConvergenceRecord,
}

/// Undamped Newton iteration `u ← u + Δu` with `J_F(u)·Δu = −F(u) + y`.
///
/// A failed linear solve is recorded and ends the run as diverged.
pub fn newton_solve<T: Real>(
    problem: &dyn NonlinearProblem<T>,
    solver: &LinearSolverKind,
    stop: &StopCriteria,
) -> Result<NewtonResult<T>, SolverError> {
    stop.validate()?;
    let mut u = problem.initial_guess();
    let mut entries = Vec::new();
    let mut failure = None;
    let residual_of = |u: &[T]| {
        let mut r = problem.residual(u);
        if let Some(y) = problem.target() {
            r.iter_mut().zip(y).for_each(|(ri, &yi)| *ri -= yi);
        }
        r
    };
    let mut iteration = 0;
    let stop_reason = loop {
        let r = residual_of(&u);
        let norm = real_norm2(&r).to_f64().unwrap_or(f64::NAN);
        let mut entry = IterationEntry {
            iteration,
            residual: norm,
            diagnostics: None,
            millis: 0.0,
        };
        if !norm.is_finite() || norm > stop.divergence_guard {
            entries.push(entry);
            break StopReason::Diverged;
        }
        if norm < stop.threshold {
            entries.push(entry);
            break StopReason::ThresholdReached;
        }
        if iteration == stop.max_iterations {
            entries.push(entry);
            break StopReason::MaxIterations;
        }
        let jac = problem.jacobian(&u);
        let rhs: Vec<Complex<T>> = to_complex(&r).into_iter().map(|z| -z).collect();
        let start = Instant::now();
        let solved = solve_linear(solver, &jac, &rhs);
        entry.millis = start.elapsed().as_secs_f64() * 1e3;
        match solved {
            Ok((du, diag)) => {
                entry.diagnostics = Some(diag);
                entries.push(entry);
                u.iter_mut().zip(&du).for_each(|(ui, d)| *ui += d.re);
            }
            Err(e) => {
                entries.push(entry);
                failure = Some((iteration, e.to_string()));
                break StopReason::Diverged;
            }
        }
        iteration += 1;
    };
    Ok(NewtonResult {
        u,
        record: ConvergenceRecord {
            entries,
            stop_reason,
            failure,
        },
    })
}
