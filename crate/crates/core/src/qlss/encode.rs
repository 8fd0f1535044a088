use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{FixedPointFormat, QlssError};
use crate::linalg::{dilate, hermitian_eigendecompose_fast, LinalgError, Matrix, HERMITIAN_TOLERANCE};
use crate::Real;

/// How a general system is turned into a Hermitian one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingMode {
    /// `A` is already Hermitian positive definite.
    HermitianPd,
    /// `A†A x = A†b`.
    NormalEquations,
    /// `[[0, A], [A†, 0]]·(y, x) = (b, 0)`.
    Dilation,
}

impl EncodingMode {
    /// Dilated spectra come in ± pairs and need a signed clock register.
    pub fn signed(self) -> bool {
        matches!(self, EncodingMode::Dilation)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EncodingMode::HermitianPd => "hermitian-pd",
            EncodingMode::NormalEquations => "normal-equations",
            EncodingMode::Dilation => "dilation",
        }
    }
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EncodingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hermitian-pd" => Ok(EncodingMode::HermitianPd),
            "normal-equations" => Ok(EncodingMode::NormalEquations),
            "dilation" => Ok(EncodingMode::Dilation),
            other => Err(format!(
                "unknown mode `{other}` (expected hermitian-pd, normal-equations or dilation)"
            )),
        }
    }
}

/// How the encoded matrix is scaled before phase estimation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prescale {
    /// Use the matrix as given.
    Off,
    /// Shrink the Gershgorin bound to the top of the format's range when it exceeds it.
    #[default]
    Fit,
    /// Map the Gershgorin bound to 1, so the relative resolution depends on `m` only.
    Unit,
}

impl Prescale {
    pub fn as_str(self) -> &'static str {
        match self {
            Prescale::Off => "off",
            Prescale::Fit => "fit",
            Prescale::Unit => "unit",
        }
    }
}

impl fmt::Display for Prescale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Prescale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(Prescale::Off),
            "fit" | "on" => Ok(Prescale::Fit),
            "unit" => Ok(Prescale::Unit),
            other => Err(format!("unknown prescale `{other}` (expected off, fit or unit)")),
        }
    }
}

/// Hermitian system `Â x̂ = b̂` plus the map back to the original unknowns.
#[derive(Clone, Debug)]
pub struct EncodedProblem<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<Complex<T>>,
    pub mode: EncodingMode,
    original_dim: usize,
}

impl<T: Real> EncodedProblem<T> {
    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    /// Original unknowns from a solution of the encoded system.
    pub fn decode(&self, x_hat: &[Complex<T>]) -> Vec<Complex<T>> {
        match self.mode {
            EncodingMode::Dilation => x_hat[self.original_dim..2 * self.original_dim].to_vec(),
            _ => x_hat[..self.original_dim].to_vec(),
        }
    }
}

/// Encode without the positivity check (Hermiticity is still enforced).
pub(crate) fn encode_unchecked<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    mode: EncodingMode,
) -> Result<EncodedProblem<T>, QlssError> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        }
        .into());
    }
    let (matrix, rhs) = match mode {
        EncodingMode::HermitianPd => {
            if !a.is_hermitian(T::lit(HERMITIAN_TOLERANCE)) {
                return Err(LinalgError::NonHermitian {
                    defect: a.hermitian_defect().to_f64().unwrap_or(f64::NAN),
                }
                .into());
            }
            (a.clone(), b.to_vec())
        }
        EncodingMode::NormalEquations => {
            let ah = a.adjoint();
            let gram = ah.matmul(a)?;
            // symmetrize away the rounding in A†A
            let gram = Matrix::from_fn(n, n, |i, j| {
                if i <= j {
                    gram[(i, j)]
                } else {
                    gram[(j, i)].conj()
                }
            });
            (gram, ah.mul_vec(b)?)
        }
        EncodingMode::Dilation => {
            let mut rhs = b.to_vec();
            rhs.resize(2 * n, Complex::zero());
            (dilate(a)?, rhs)
        }
    };
    Ok(EncodedProblem {
        matrix,
        rhs,
        mode,
        original_dim: n,
    })
}

/// Turn `A x = b` into a Hermitian system according to `mode`.
///
/// Errors with [`QlssError::NotPositiveDefinite`] in Hermitian-PD mode when
/// any eigenvalue is ≤ 0.
pub fn encode_problem<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    mode: EncodingMode,
) -> Result<EncodedProblem<T>, QlssError> {
    let enc = encode_unchecked(a, b, mode)?;
    if mode == EncodingMode::HermitianPd {
        let eig = hermitian_eigendecompose_fast(&enc.matrix)?;
        check_positive(&eig.eigenvalues)?;
    }
    Ok(enc)
}

pub(crate) fn check_positive<T: Real>(eigenvalues: &[T]) -> Result<(), QlssError> {
    match eigenvalues.first() {
        Some(&l) if l <= T::zero() => Err(QlssError::NotPositiveDefinite {
            min_eigenvalue: l.to_f64().unwrap_or(f64::NAN),
        }),
        _ => Ok(()),
    }
}

/// Gershgorin bound on the spectral radius of a Hermitian matrix.
pub fn gershgorin_bound<T: Real>(a: &Matrix<T>) -> T {
    a.max_row_sum()
}

/// Scale factor for a Hermitian matrix with Gershgorin bound `bound`.
///
/// `Fit` returns `s ≤ 1`, and `s = 1` when the bound already fits the
/// format. `Unit` maps the bound to 1 (or to the fit target when that is
/// smaller), independently of `m`.
pub(crate) fn prescale_factor<T: Real>(bound: T, fmt: &FixedPointFormat, policy: Prescale) -> T {
    let target = fmt.prescale_target::<T>();
    if bound.is_zero() || !bound.is_finite() {
        return T::one();
    }
    match policy {
        Prescale::Off => T::one(),
        Prescale::Fit if bound <= target => T::one(),
        Prescale::Fit => target / bound,
        Prescale::Unit => target.min(T::one()) / bound,
    }
}

/// `(s·Â, s)` with `s` chosen so the Gershgorin bound of `s·Â` fits the
/// format's magnitude range; `s = 1` when it already does. Solutions of
/// `s·Â y = b̂` satisfy `x̂ = s·y`.
pub fn spectral_prescale<T: Real>(a_hat: &Matrix<T>, fmt: &FixedPointFormat) -> (Matrix<T>, T) {
    prescale_with(a_hat, fmt, Prescale::Fit)
}

/// `(s·Â, s)` under an explicit policy.
pub fn prescale_with<T: Real>(a_hat: &Matrix<T>, fmt: &FixedPointFormat, policy: Prescale) -> (Matrix<T>, T) {
    let s = prescale_factor(gershgorin_bound(a_hat), fmt, policy);
    if s == T::one() {
        (a_hat.clone(), s)
    } else {
        (a_hat.scale(s), s)
    }
}
