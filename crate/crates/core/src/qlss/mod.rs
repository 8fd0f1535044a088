//! Comparator-based quantum linear system solver: encoding, phase
//! estimation, inversion by counting, post-selection and read-out.

mod circuit;
mod encode;
mod fixed_point;

pub use circuit::{build_qft, build_qpe, controlled_negate, qlss_layout, run_qlss};
pub use encode::{
    encode_problem, gershgorin_bound, prescale_with, spectral_prescale, EncodedProblem, EncodingMode, Prescale,
};
pub use fixed_point::{FixedPointFormat, MAX_BITS};

pub(crate) use encode::{check_positive, encode_unchecked, prescale_factor};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::vector::{dot, norm2};
use crate::linalg::{LinalgError, Matrix};
use crate::qarith::QarithError;
use crate::qsim::SimError;
use crate::Real;

/// `‖A·x̂‖₂` below this makes the rescale undefined.
pub const DEGENERATE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlssError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Arith(#[from] QarithError),
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("eigenvalues outside the representable range: {eigenvalues:?}")]
    RangeViolation { eigenvalues: Vec<f64> },
    #[error("eigenvalue {lambda} outside the representable range (|λ| < {bound})")]
    OutOfRange { lambda: f64, bound: f64 },
    #[error("A·x̂ vanishes; the solution direction cannot be rescaled")]
    DegenerateDirection,
    #[error("right-hand side is zero")]
    ZeroRhs,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// How the solution register is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutMode {
    /// Signed amplitudes of the post-selected state.
    ExactAmplitude,
    /// Magnitudes from a shot histogram of successful post-selections;
    /// phases come from the exact amplitudes.
    Sampled { shots: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlssConfig {
    pub m: u32,
    pub mode: EncodingMode,
    pub readout: ReadoutMode,
    pub prescale: Prescale,
}

impl QlssConfig {
    /// Exact read-out with [`Prescale::Fit`].
    pub fn new(m: u32, mode: EncodingMode) -> Self {
        Self {
            m,
            mode,
            readout: ReadoutMode::ExactAmplitude,
            prescale: Prescale::Fit,
        }
    }

    pub fn with_readout(mut self, readout: ReadoutMode) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_prescale(mut self, prescale: Prescale) -> Self {
        self.prescale = prescale;
        self
    }

    pub fn format(&self) -> Result<FixedPointFormat, QlssError> {
        if let ReadoutMode::Sampled { shots: 0, .. } = self.readout {
            return Err(QlssError::InvalidConfig("shots must be at least 1".into()));
        }
        FixedPointFormat::new(self.m, self.mode.signed())
    }
}

/// Per-eigenvalue breakdown of the two approximation steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub lambda: f64,
    pub quantized: f64,
    pub inverse: f64,
    /// `| |λ̃| − |λ| |`
    pub quantization_error: f64,
    /// `|ι − 1/λ̃|`
    pub inversion_error: f64,
    /// `|ι − 1/λ|`
    pub total_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QlssDiagnostics {
    /// Spectral condition number of the encoded matrix (`None` when singular).
    pub condition_number: Option<f64>,
    pub evolution_time: f64,
    pub prescale: f64,
    /// Eigenvalues of the prescaled matrix outside the format's range.
    pub range_violations: Vec<f64>,
    /// `2^{-m}·Σ ι_i² / N`: the success probability under uniform overlaps.
    pub uniform_success_probability: f64,
    /// Total simulated qubits (0 for the classical model).
    pub qubits: usize,
    pub eigenvalues: Vec<EigenReport>,
}

#[derive(Clone, Debug)]
pub struct QlssResult<T> {
    /// Rescaled solution of the original system.
    pub solution: Vec<Complex<T>>,
    /// Unit-norm solution direction before rescaling.
    pub normalized: Vec<Complex<T>>,
    pub success_probability: T,
    /// Shots drawn until the requested number of successes (sampled read-out).
    pub postselect_attempts: Option<u64>,
    pub diagnostics: QlssDiagnostics,
}

/// `α·x̂` with `α = ⟨A·x̂, b⟩ / ‖A·x̂‖₂²`, the scalar minimizing `‖A(αx̂) − b‖₂`.
pub fn rescale_to_classical<T: Real>(
    x_hat: &[Complex<T>],
    a: &Matrix<T>,
    b: &[Complex<T>],
) -> Result<Vec<Complex<T>>, QlssError> {
    let ax = a.mul_vec(x_hat)?;
    if b.len() != ax.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: ax.len(),
            found: b.len(),
        }
        .into());
    }
    let den = norm2(&ax);
    if !(den >= T::lit(DEGENERATE_TOLERANCE)) {
        return Err(QlssError::DegenerateDirection);
    }
    let alpha = dot(&ax, b) / (den * den);
    Ok(x_hat.iter().map(|&z| z * alpha).collect())
}

type DirectionAndSolution<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// Decode-side post-processing shared by the gate and model paths: unit
/// direction of the decoded vector and its rescaled counterpart.
pub(crate) fn finish_solution<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    decoded: &[Complex<T>],
) -> Result<DirectionAndSolution<T>, QlssError> {
    let normalized =
        crate::linalg::vector::normalized(decoded).ok_or(QlssError::DegenerateDirection)?;
    let solution = rescale_to_classical(&normalized, a, b)?;
    Ok((solution, normalized))
}
