use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RegisterLayout, SimError, StateVector};
use crate::Real;

/// Projections with norm below this are reported as [`SimError::ZeroProbability`].
pub const POST_SELECT_TOLERANCE: f64 = 1e-14;

/// Result of a projective post-selection.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome<T> {
    /// Register name and the value it was constrained to.
    pub values: Vec<(String, usize)>,
    pub probability: T,
    pub post_state: StateVector<T>,
}

/// Project onto the basis states where every named register holds its value.
pub fn post_select<T: Real>(
    state: &StateVector<T>,
    layout: &RegisterLayout,
    constraints: &[(&str, usize)],
) -> Result<MeasurementOutcome<T>, SimError> {
    if layout.qubit_count() != state.qubit_count() {
        return Err(SimError::DimensionMismatch {
            expected: state.qubit_count(),
            found: layout.qubit_count(),
        });
    }
    let mut mask = 0usize;
    let mut pattern = 0usize;
    let mut values = Vec::with_capacity(constraints.len());
    for &(name, value) in constraints {
        let reg = layout.get(name)?;
        if value >> reg.len() != 0 {
            return Err(SimError::ValueOutOfRange {
                name: name.to_string(),
                value,
                width: reg.len(),
            });
        }
        mask |= reg.mask();
        pattern |= value << reg.start();
        values.push((name.to_string(), value));
    }
    let projected: Vec<Complex<T>> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| if i & mask == pattern { a } else { Complex::zero() })
        .collect();
    let probability: T = projected.iter().map(|z| z.norm_sqr()).sum();
    let norm = probability.sqrt();
    if !(norm >= T::lit(POST_SELECT_TOLERANCE)) {
        return Err(SimError::ZeroProbability);
    }
    let post = projected.into_iter().map(|z| z / norm).collect();
    Ok(MeasurementOutcome {
        values,
        probability,
        post_state: StateVector::from_raw(state.qubit_count(), post),
    })
}

/// Measure `register` `shots` times; returns value → count.
///
/// Uses ChaCha8 seeded from `seed`, so histograms are identical across runs
/// and platforms.
pub fn sample_measurements<T: Real>(
    state: &StateVector<T>,
    layout: &RegisterLayout,
    register: &str,
    shots: usize,
    seed: u64,
) -> Result<BTreeMap<usize, usize>, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let reg = layout.get(register)?;
    let mut marginal = vec![0.0f64; 1usize << reg.len()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        marginal[reg.extract(i)] += a.norm_sqr().to_f64().unwrap_or(0.0);
    }
    let mut cumulative = Vec::with_capacity(marginal.len());
    let mut acc = 0.0;
    for p in &marginal {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let mut v = cumulative.partition_point(|&c| c <= u);
        // guard the right edge and skip zero-probability bins at rounding boundaries
        v = v.min(marginal.len() - 1);
        while marginal[v] == 0.0 && v > 0 {
            v -= 1;
        }
        *hist.entry(v).or_insert(0) += 1;
    }
    Ok(hist)
}
