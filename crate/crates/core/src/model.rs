//! Classical model of the solver: eigenvalues are rounded to the fixed-point
//! grid and inverted by counting, with no quantum dynamics.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::vector::norm2;
use crate::linalg::{hermitian_eigendecompose_fast, singular_value_decompose, Matrix};
use crate::qlss::{
    check_positive, encode_unchecked, finish_solution, gershgorin_bound, prescale_factor, EigenReport,
    EncodingMode, FixedPointFormat, QlssConfig, QlssDiagnostics, QlssError, QlssResult,
};
use crate::Real;

/// An eigenvalue rounded onto the format's grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizedEigenvalue<T> {
    pub raw: T,
    /// `|λ̃| = L·2^{-k}`.
    pub value: T,
    /// `L`.
    pub mantissa: u64,
    /// `+1` or `−1`.
    pub sign: i8,
}

impl<T: Real> QuantizedEigenvalue<T> {
    /// Signed `λ̃`.
    pub fn signed_value(&self) -> T {
        if self.sign < 0 {
            -self.value
        } else {
            self.value
        }
    }
}

/// Round `|λ|` to the nearest multiple of `2^{-k}` (ties away from zero).
///
/// Errors with `OutOfRange` when the rounded mantissa does not fit the
/// format (for unsigned formats, exactly when `|λ|·2^k` rounds to `2^m` or more).
pub fn quantize_eigenvalue<T: Real>(
    lambda: T,
    fmt: &FixedPointFormat,
) -> Result<QuantizedEigenvalue<T>, QlssError> {
    let limit = fmt.mantissa_limit();
    let bound = T::from_u64(limit).expect("fits") * fmt.resolution::<T>();
    let out_of_range = || QlssError::OutOfRange {
        lambda: lambda.to_f64().unwrap_or(f64::NAN),
        bound: bound.to_f64().unwrap_or(f64::NAN),
    };
    if !lambda.is_finite() {
        return Err(out_of_range());
    }
    let scaled = (lambda.abs() / fmt.resolution::<T>()).round();
    let mantissa = scaled.to_u64().filter(|&l| l < limit).ok_or_else(out_of_range)?;
    Ok(QuantizedEigenvalue {
        raw: lambda,
        value: T::from_u64(mantissa).expect("fits") * fmt.resolution::<T>(),
        mantissa,
        sign: if lambda < T::zero() { -1 } else { 1 },
    })
}

/// `|{j ∈ [0, 2^m) : j·L < 2^m}|` in closed form: `min(2^m, ⌈2^m / L⌉)`, and `2^m` for `L = 0`.
pub fn inversion_count(mantissa: u64, fmt: &FixedPointFormat) -> u64 {
    let modulus = fmt.modulus();
    if mantissa == 0 {
        modulus
    } else {
        modulus.div_ceil(mantissa).min(modulus)
    }
}

/// `sign · count · 2^{k−m}`, the counting approximation of `1/λ̃`.
pub fn invert_by_counting<T: Real>(q: &QuantizedEigenvalue<T>, fmt: &FixedPointFormat) -> T {
    let count = T::from_u64(inversion_count(q.mantissa, fmt)).expect("fits");
    let scale = T::lit(2.0).powi(fmt.k() as i32 - fmt.m() as i32);
    let v = count * scale;
    if q.sign < 0 {
        -v
    } else {
        v
    }
}

/// Inverse, post-selection weight `count/2^m` and report entry for one eigenvalue.
pub(crate) fn invert<T: Real>(lambda: T, fmt: &FixedPointFormat) -> Result<(T, T, EigenReport), QlssError> {
    let q = quantize_eigenvalue(lambda, fmt)?;
    let iota = invert_by_counting(&q, fmt);
    let weight = T::from_u64(inversion_count(q.mantissa, fmt)).expect("fits")
        / T::from_u64(fmt.modulus()).expect("fits");
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let lt = q.signed_value();
    let report = EigenReport {
        lambda: f(lambda),
        quantized: f(lt),
        inverse: f(iota),
        quantization_error: f((q.value - lambda.abs()).abs()),
        inversion_error: if q.value.is_zero() {
            f64::INFINITY
        } else {
            f((iota - T::one() / lt).abs())
        },
        total_error: f((iota - T::one() / lambda).abs()),
    };
    Ok((iota, weight, report))
}

pub(crate) fn spectral_condition<T: Real>(magnitudes: impl Iterator<Item = T>) -> Option<f64> {
    let (lo, hi) = magnitudes.fold((T::infinity(), T::zero()), |(lo, hi), x| (lo.min(x), hi.max(x)));
    (lo > T::zero() && hi.is_finite()).then(|| (hi / lo).to_f64().unwrap_or(f64::NAN))
}

/// Solve `A x = b` with the classical model of the solver.
///
/// The encoded matrix is prescaled (when enabled), every eigenvalue is
/// quantized and inverted by counting, and `x̂ = Σ ⟨u_i, b̂⟩·ι(λ̃_i)·u_i` is
/// decoded, normalized and rescaled. In dilation mode the eigenpairs
/// `(±σ_i, (u_i, ±v_i)/√2)` come from an SVD of `A`.
pub fn model_qlss_solve<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    config: &QlssConfig,
) -> Result<QlssResult<T>, QlssError> {
    let fmt = config.format()?;
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(crate::linalg::LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        }
        .into());
    }
    let b_norm = norm2(b);
    if b_norm.is_zero() {
        return Err(QlssError::ZeroRhs);
    }
    let modulus_sq = |w: T| w * w;

    let (decoded, probability, reports, scale, condition) = match config.mode {
        EncodingMode::Dilation => {
            let s = prescale_factor(a.max_row_sum().max(a.max_col_sum()), &fmt, config.prescale);
            let svd = singular_value_decompose(a)?;
            let mut lower = vec![Complex::zero(); n];
            let mut probability = T::zero();
            let mut reports = Vec::with_capacity(2 * n);
            for (i, &sigma) in svd.values.iter().enumerate() {
                let sigma = sigma * s;
                let (ip, wp, rp) = invert(sigma, &fmt)?;
                let (im, wm, rm) = invert(-sigma, &fmt)?;
                reports.push(rp);
                reports.push(rm);
                let c = (0..n).fold(Complex::zero(), |acc, r| acc + svd.left[(r, i)].conj() * b[r]);
                probability += c.norm_sqr() * (modulus_sq(wp) + modulus_sq(wm)) / T::lit(2.0);
                let w = c * ((ip - im) / T::lit(2.0));
                for (r, x) in lower.iter_mut().enumerate() {
                    *x += svd.right[(r, i)] * w;
                }
            }
            let cond = spectral_condition(svd.values.iter().copied());
            (lower, probability / (b_norm * b_norm), reports, s, cond)
        }
        mode => {
            let enc = encode_unchecked(a, b, mode)?;
            let eig = hermitian_eigendecompose_fast(&enc.matrix)?;
            if mode == EncodingMode::HermitianPd {
                check_positive(&eig.eigenvalues)?;
            }
            let s = prescale_factor(gershgorin_bound(&enc.matrix), &fmt, config.prescale);
            let coeffs = eig.coefficients(&enc.rhs);
            let mut weights = Vec::with_capacity(coeffs.len());
            let mut reports = Vec::with_capacity(coeffs.len());
            let mut probability = T::zero();
            for (&lambda, &c) in eig.eigenvalues.iter().zip(&coeffs) {
                let (iota, w, report) = invert(lambda * s, &fmt)?;
                reports.push(report);
                probability += c.norm_sqr() * modulus_sq(w);
                weights.push(c * iota);
            }
            let rhs_norm = norm2(&enc.rhs);
            let x_hat = eig.combine(&weights);
            let cond = spectral_condition(eig.eigenvalues.iter().map(|l| l.abs()));
            (
                enc.decode(&x_hat),
                probability / (rhs_norm * rhs_norm),
                reports,
                s,
                cond,
            )
        }
    };

    let (solution, normalized) = finish_solution(a, b, &decoded)?;
    let uniform = reports.iter().map(|r| r.inverse * r.inverse).sum::<f64>()
        * 2f64.powi(-(fmt.m() as i32))
        / reports.len() as f64;
    Ok(QlssResult {
        solution,
        normalized,
        success_probability: probability,
        postselect_attempts: None,
        diagnostics: QlssDiagnostics {
            condition_number: condition,
            evolution_time: fmt.evolution_time::<f64>(),
            prescale: scale.to_f64().unwrap_or(f64::NAN),
            range_violations: Vec::new(),
            uniform_success_probability: uniform,
            qubits: 0,
            eigenvalues: reports,
        },
    })
}
