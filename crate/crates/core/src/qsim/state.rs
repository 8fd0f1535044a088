use std::ops::Range;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::gate::{phase, Control, ControlledUnitary, Gate};
use super::{Circuit, RegisterLayout, SimError, MAX_QUBITS};
use crate::linalg::Matrix;
use crate::Real;

/// Amplitudes of a `qubit_count`-qubit register; basis index bit `q` is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    qubit_count: usize,
    amplitudes: Vec<Complex<T>>,
}

fn check_width(qubits: usize) -> Result<(), SimError> {
    if qubits > MAX_QUBITS {
        Err(SimError::WidthExceeded {
            requested: qubits,
            max: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

impl<T: Real> StateVector<T> {
    /// |0…0⟩.
    pub fn zero(qubit_count: usize) -> Result<Self, SimError> {
        Self::basis(qubit_count, 0)
    }

    pub fn basis(qubit_count: usize, index: usize) -> Result<Self, SimError> {
        check_width(qubit_count)?;
        let dim = 1usize << qubit_count;
        if index >= dim {
            return Err(SimError::IndexOutOfRange {
                index,
                qubits: qubit_count,
            });
        }
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Ok(Self {
            qubit_count,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(qubit_count: usize, amplitudes: Vec<Complex<T>>) -> Result<Self, SimError> {
        check_width(qubit_count)?;
        if amplitudes.len() != 1usize << qubit_count {
            return Err(SimError::DimensionMismatch {
                expected: 1usize << qubit_count,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm.is_zero() || !norm.is_finite() {
            return Err(SimError::ZeroVector);
        }
        Ok(Self {
            qubit_count,
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Register `B` of `layout` holds `b/‖b‖₂` (zero-padded); everything else is |0⟩.
    pub fn prepare_amplitude_state(
        b: &[Complex<T>],
        layout: &RegisterLayout,
        register: &str,
    ) -> Result<Self, SimError> {
        let reg = layout.get(register)?;
        if b.len() > 1usize << reg.len() {
            return Err(SimError::DimensionMismatch {
                expected: 1usize << reg.len(),
                found: b.len(),
            });
        }
        check_width(layout.qubit_count())?;
        let norm = b.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm.is_zero() || !norm.is_finite() {
            return Err(SimError::ZeroVector);
        }
        let mut amplitudes = vec![Complex::zero(); 1usize << layout.qubit_count()];
        for (v, &z) in b.iter().enumerate() {
            amplitudes[v << reg.start()] = z / norm;
        }
        Ok(Self {
            qubit_count: layout.qubit_count(),
            amplitudes,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Born probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub(crate) fn from_raw(qubit_count: usize, amplitudes: Vec<Complex<T>>) -> Self {
        Self {
            qubit_count,
            amplitudes,
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<(), SimError> {
        gate.validate(self.qubit_count)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit<T>) -> Result<(), SimError> {
        for g in circuit.gates() {
            g.validate(self.qubit_count)?;
        }
        for g in circuit.gates() {
            self.apply_unchecked(g);
        }
        Ok(())
    }

    /// Apply `u` to `target` on the subspace where `control` is |1⟩.
    pub fn apply_controlled_unitary(
        &mut self,
        u: &Matrix<T>,
        target: Range<usize>,
        control: usize,
    ) -> Result<(), SimError> {
        let gate = Gate::ControlledUnitary(ControlledUnitary::new(u.clone(), target, control)?);
        self.apply_gate(&gate)
    }

    fn apply_unchecked(&mut self, gate: &Gate<T>) {
        match gate {
            Gate::H(q) => self.hadamard(*q),
            Gate::X(q) => self.controlled_x(&[], *q),
            Gate::Phase(q, theta) => {
                let f = phase(*theta);
                let bit = 1usize << q;
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a *= f;
                    }
                }
            }
            Gate::CX { control, target } => self.controlled_x(&[Control::one(*control)], *target),
            Gate::CCX { controls, target } => self.controlled_x(
                &[Control::one(controls[0]), Control::one(controls[1])],
                *target,
            ),
            Gate::CPhase {
                control,
                target,
                theta,
            } => {
                let f = phase(*theta);
                let mask = (1usize << control) | (1usize << target);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= f;
                    }
                }
            }
            Gate::Mcx { controls, target } => self.controlled_x(controls, *target),
            Gate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for i in 0..self.amplitudes.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amplitudes.swap(i, i ^ ba ^ bb);
                    }
                }
            }
            Gate::ControlledUnitary(cu) => self.controlled_dense(cu),
        }
    }

    fn hadamard(&mut self, q: usize) {
        let s = T::FRAC_1_SQRT_2();
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | bit];
                self.amplitudes[i] = (a + b) * s;
                self.amplitudes[i | bit] = (a - b) * s;
            }
        }
    }

    fn controlled_x(&mut self, controls: &[Control], target: usize) {
        let mut mask = 0usize;
        let mut pattern = 0usize;
        for c in controls {
            mask |= 1 << c.qubit;
            if c.on {
                pattern |= 1 << c.qubit;
            }
        }
        let bit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 && i & mask == pattern {
                self.amplitudes.swap(i, i | bit);
            }
        }
    }

    fn controlled_dense(&mut self, cu: &ControlledUnitary<T>) {
        let target = cu.target();
        let width = target.len();
        let dim = 1usize << width;
        let start = target.start;
        let block_mask = (dim - 1) << start;
        let control_bit = 1usize << cu.control();
        let u = cu.unitary();
        let mut gathered = vec![Complex::zero(); dim];
        for base in 0..self.amplitudes.len() {
            if base & block_mask != 0 || base & control_bit == 0 {
                continue;
            }
            for (v, g) in gathered.iter_mut().enumerate() {
                *g = self.amplitudes[base | (v << start)];
            }
            for r in 0..dim {
                let row = u.row(r);
                let mut acc = Complex::zero();
                for (x, y) in row.iter().zip(&gathered) {
                    acc += x * y;
                }
                self.amplitudes[base | (r << start)] = acc;
            }
        }
    }
}
