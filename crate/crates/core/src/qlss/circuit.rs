use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    encode_unchecked, finish_solution, prescale_with, FixedPointFormat, QlssConfig, QlssDiagnostics,
    QlssError, QlssResult, ReadoutMode,
};
use crate::linalg::vector::norm2;
use crate::linalg::{hermitian_eigendecompose_fast, unitary_from_eigen, EigenDecomposition, Matrix};
use crate::model::{invert, spectral_condition};
use crate::qarith::{build_comparator_pow2, build_multiplier};
use crate::qsim::{post_select, Circuit, Control, ControlledUnitary, Gate, RegisterLayout, SimError, StateVector, MAX_QUBITS};
use crate::Real;

/// Quantum Fourier transform on `qubits` (little-endian: `qubits[0]` is the
/// least significant bit), mapping `|x⟩ → 2^{-w/2} Σ_y e^{2πi·xy/2^w}|y⟩`.
pub fn build_qft<T: Real>(qubits: &[usize]) -> Circuit<T> {
    let w = qubits.len();
    let mut c = Circuit::new();
    for j in (0..w).rev() {
        c.push(Gate::H(qubits[j]));
        for l in (0..j).rev() {
            c.push(Gate::CPhase {
                control: qubits[l],
                target: qubits[j],
                theta: T::PI() / T::lit(2.0).powi((j - l) as i32),
            });
        }
    }
    for q in 0..w / 2 {
        c.push(Gate::Swap(qubits[q], qubits[w - 1 - q]));
    }
    c
}

/// Layout of the full pipeline for an `n`-qubit system register and `m`-bit clock.
pub fn qlss_layout(n: usize, m: usize) -> RegisterLayout {
    RegisterLayout::for_qlss(n, m)
}

fn register_qubits(layout: &RegisterLayout, name: &str) -> Result<Vec<usize>, SimError> {
    Ok(layout.get(name)?.range().collect())
}

/// Phase estimation of `e^{iÂt}` with `t = 2π/2^{⌈m/2⌉}` from register `B`
/// into clock register `C`; an eigenstate with `λ·2^k` integral leaves `C`
/// holding that integer (two's complement for negative `λ`).
pub fn build_qpe<T: Real>(
    a_hat: &Matrix<T>,
    fmt: &FixedPointFormat,
    layout: &RegisterLayout,
) -> Result<Circuit<T>, QlssError> {
    let eig = hermitian_eigendecompose_fast(a_hat)?;
    qpe_from_eigen(&eig, fmt, layout)
}

fn qpe_from_eigen<T: Real>(
    eig: &EigenDecomposition<T>,
    fmt: &FixedPointFormat,
    layout: &RegisterLayout,
) -> Result<Circuit<T>, QlssError> {
    let b = layout.get(RegisterLayout::B)?.range();
    let clock = register_qubits(layout, RegisterLayout::C)?;
    if eig.dim() != 1usize << b.len() {
        return Err(SimError::DimensionMismatch {
            expected: 1usize << b.len(),
            found: eig.dim(),
        }
        .into());
    }
    let t = fmt.evolution_time::<T>();
    let mut c = Circuit::new();
    for &q in &clock {
        c.push(Gate::H(q));
    }
    for (i, &q) in clock.iter().enumerate() {
        let u = unitary_from_eigen(eig, t * T::lit(2.0).powi(i as i32));
        c.push(Gate::ControlledUnitary(ControlledUnitary::new(u, b.clone(), q)?));
    }
    c.append(&build_qft::<T>(&clock).inverse());
    Ok(c)
}

/// Two's-complement negation of `register` conditioned on `control`: flip
/// every bit, then add one with a cascade of multi-controlled X from the top bit down.
pub fn controlled_negate<T: Real>(register: &[usize], control: usize) -> Circuit<T> {
    let mut c = Circuit::new();
    for &q in register {
        c.push(Gate::CX {
            control,
            target: q,
        });
    }
    for i in (0..register.len()).rev() {
        let controls = std::iter::once(control)
            .chain(register[..i].iter().copied())
            .map(Control::one)
            .collect();
        c.push(Gate::Mcx {
            controls,
            target: register[i],
        });
    }
    c
}

/// Everything between phase estimation and its inverse: uniform
/// superposition on M1, optional sign extraction, multiplication,
/// comparison, and uncomputation of all but the comparison.
fn inversion_core<T: Real>(layout: &RegisterLayout, signed: bool) -> Result<Circuit<T>, QlssError> {
    let clock = register_qubits(layout, RegisterLayout::C)?;
    let m1 = register_qubits(layout, RegisterLayout::M1)?;
    let m2 = register_qubits(layout, RegisterLayout::M2)?;
    let anc_cm = layout.get(RegisterLayout::ANC_CM)?.start();
    let anc_c = layout.get(RegisterLayout::ANC_C)?.start();
    let flag = layout.get(RegisterLayout::ANC_FLAG)?.start();
    let m = clock.len();

    let mut hadamards = Circuit::new();
    for &q in &m1 {
        hadamards.push(Gate::H(q));
    }
    let mut sign = Circuit::new();
    if signed {
        sign.push(Gate::CX {
            control: clock[m - 1],
            target: anc_c,
        });
        sign.append(&controlled_negate(&clock, anc_c));
    }
    let mult_map: Vec<usize> = clock.iter().chain(&m1).chain(&m2).copied().chain([anc_cm]).collect();
    let mult = build_multiplier(m)?.embed::<T>(&mult_map);
    let cmp_map: Vec<usize> = m2.iter().copied().chain([flag]).collect();
    let cmp = build_comparator_pow2(2 * m, m)?.embed::<T>(&cmp_map);

    let mut c = Circuit::new();
    c.append(&hadamards).append(&sign).append(&mult).append(&cmp);
    if signed {
        c.push(Gate::Phase(anc_c, T::PI()));
    }
    c.append(&mult.inverse()).append(&sign.inverse()).append(&hadamards);
    Ok(c)
}

/// Run the full gate-level pipeline on `A x = b`.
///
/// The state `b̂/‖b̂‖` is prepared on register B, phase estimation writes
/// eigenvalues to C, M1 is put in uniform superposition, M2 ← M1·|C|, the
/// flag is set when M2 ≥ 2^m, everything but the comparison is undone, and
/// the branch with all work registers and the flag at zero is kept. Its B
/// amplitudes are proportional to `Σ_i ⟨u_i, b̂⟩·count_i·u_i`.
pub fn run_qlss<T: Real>(
    a: &Matrix<T>,
    b: &[Complex<T>],
    config: &QlssConfig,
) -> Result<QlssResult<T>, QlssError> {
    let fmt = config.format()?;
    let enc = encode_unchecked(a, b, config.mode)?;
    if norm2(&enc.rhs).is_zero() {
        return Err(QlssError::ZeroRhs);
    }
    let dim = enc.matrix.rows();
    let n = dim.next_power_of_two().trailing_zeros() as usize;
    let m = fmt.m() as usize;
    let qubits = n + 4 * m + 3;
    if qubits > MAX_QUBITS {
        return Err(SimError::WidthExceeded {
            requested: qubits,
            max: MAX_QUBITS,
        }
        .into());
    }
    let (scaled, s) = prescale_with(&enc.matrix, &fmt, config.prescale);
    let eig = hermitian_eigendecompose_fast(&scaled)?;
    if config.mode == super::EncodingMode::HermitianPd {
        super::check_positive(&eig.eigenvalues)?;
    }
    let mut violations = Vec::new();
    let mut inverses = Vec::with_capacity(dim);
    for &l in &eig.eigenvalues {
        match invert(l, &fmt) {
            Ok((iota, _, _)) => inverses.push(iota.to_f64().unwrap_or(f64::NAN)),
            Err(_) => violations.push(l.to_f64().unwrap_or(f64::NAN)),
        }
    }
    if !violations.is_empty() {
        return Err(QlssError::RangeViolation {
            eigenvalues: violations,
        });
    }
    let condition = spectral_condition(eig.eigenvalues.iter().map(|l| l.abs()));

    let padded_eig = if dim == 1usize << n {
        eig
    } else {
        hermitian_eigendecompose_fast(&scaled.padded(1 << n, 1 << n))?
    };
    let layout = qlss_layout(n, m);
    let qpe = qpe_from_eigen(&padded_eig, &fmt, &layout)?;
    let mut circuit = qpe.clone();
    circuit.append(&inversion_core(&layout, fmt.signed())?);
    circuit.append(&qpe.inverse());

    let mut state = StateVector::prepare_amplitude_state(&enc.rhs, &layout, RegisterLayout::B)?;
    state.run(&circuit)?;
    let constraints = [
        (RegisterLayout::C, 0),
        (RegisterLayout::M1, 0),
        (RegisterLayout::M2, 0),
        (RegisterLayout::ANC_CM, 0),
        (RegisterLayout::ANC_C, 0),
        (RegisterLayout::ANC_FLAG, 0),
    ];
    let outcome = post_select(&state, &layout, &constraints)?;
    let b_reg = layout.get(RegisterLayout::B)?;
    let exact: Vec<Complex<T>> = (0..dim)
        .map(|v| outcome.post_state.amplitudes()[v << b_reg.start()])
        .collect();

    let (x_hat, attempts) = match config.readout {
        ReadoutMode::ExactAmplitude => (exact, None),
        ReadoutMode::Sampled { shots, seed } => {
            let probs: Vec<f64> = exact
                .iter()
                .map(|z| z.norm_sqr().to_f64().unwrap_or(0.0))
                .collect();
            let p_success = outcome.probability.to_f64().unwrap_or(0.0);
            let (hist, attempts) = sample_successes(&probs, p_success, shots, seed);
            let total = T::from_u64(shots).expect("fits");
            let sampled = exact
                .iter()
                .zip(&hist)
                .map(|(&z, &k)| {
                    let mag = (T::from_u64(k).expect("fits") / total).sqrt();
                    let r = z.norm();
                    if r.is_zero() {
                        Complex::zero()
                    } else {
                        z / r * mag
                    }
                })
                .collect();
            (sampled, Some(attempts))
        }
    };

    let decoded = enc.decode(&x_hat);
    let (solution, normalized) = finish_solution(a, b, &decoded)?;
    let uniform = inverses.iter().map(|i| i * i).sum::<f64>() * 2f64.powi(-(m as i32))
        / inverses.len() as f64;
    Ok(QlssResult {
        solution,
        normalized,
        success_probability: outcome.probability,
        postselect_attempts: attempts,
        diagnostics: QlssDiagnostics {
            condition_number: condition,
            evolution_time: fmt.evolution_time::<f64>(),
            prescale: s.to_f64().unwrap_or(f64::NAN),
            range_violations: Vec::new(),
            uniform_success_probability: uniform,
            qubits,
            eigenvalues: Vec::new(),
        },
    })
}

/// Histogram of `shots` successful read-outs of the solution register and
/// the number of attempts it took. `probs` are the conditional Born
/// probabilities of each value; failures between successes are geometric
/// with success probability `p_success`.
fn sample_successes(probs: &[f64], p_success: f64, shots: u64, seed: u64) -> (Vec<u64>, u64) {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = vec![0u64; probs.len()];
    let mut attempts = 0u64;
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let mut v = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
        while probs[v] == 0.0 && v > 0 {
            v -= 1;
        }
        hist[v] += 1;
        attempts += 1;
        if p_success < 1.0 {
            let r: f64 = 1.0 - rng.random::<f64>();
            attempts += (r.ln() / (1.0 - p_success).ln()).floor() as u64;
        }
    }
    (hist, attempts)
}
