use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex;

use super::SimError;
use crate::linalg::Matrix;
use crate::Real;

/// Unitarity tolerance (max-norm of `U†U − I`).
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// A control qubit; `on == true` fires on |1⟩, `false` on |0⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Self { qubit, on: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Self { qubit, on: false }
    }
}

/// Dense unitary acting on a contiguous qubit range, conditioned on one qubit.
#[derive(Clone, Debug)]
pub struct ControlledUnitary<T> {
    control: usize,
    target: Range<usize>,
    unitary: Arc<Matrix<T>>,
}

impl<T: Real> ControlledUnitary<T> {
    /// Validates that `unitary` is `2^len × 2^len` and unitary within [`UNITARY_TOLERANCE`].
    pub fn new(unitary: Matrix<T>, target: Range<usize>, control: usize) -> Result<Self, SimError> {
        let dim = 1usize << target.len();
        if unitary.rows() != dim || unitary.cols() != dim {
            return Err(SimError::DimensionMismatch {
                expected: dim,
                found: unitary.rows(),
            });
        }
        let defect = unitary
            .adjoint()
            .matmul(&unitary)
            .and_then(|g| g.sub(&Matrix::identity(dim)))
            .map(|d| d.max_abs())
            .map_err(|_| SimError::NonUnitary { defect: f64::NAN })?;
        if !(defect <= T::lit(UNITARY_TOLERANCE)) {
            return Err(SimError::NonUnitary {
                defect: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            control,
            target,
            unitary: Arc::new(unitary),
        })
    }

    pub fn control(&self) -> usize {
        self.control
    }

    pub fn target(&self) -> Range<usize> {
        self.target.clone()
    }

    pub fn unitary(&self) -> &Matrix<T> {
        &self.unitary
    }

    fn adjoint(&self) -> Self {
        Self {
            control: self.control,
            target: self.target.clone(),
            unitary: Arc::new(self.unitary.adjoint()),
        }
    }
}

/// Elementary operations understood by the simulator.
#[derive(Clone, Debug)]
pub enum Gate<T> {
    H(usize),
    X(usize),
    /// diag(1, e^{iθ})
    Phase(usize, T),
    CX { control: usize, target: usize },
    CCX { controls: [usize; 2], target: usize },
    /// Phase e^{iθ} on |11⟩.
    CPhase { control: usize, target: usize, theta: T },
    /// X on `target` when every control matches its polarity.
    Mcx { controls: Vec<Control>, target: usize },
    Swap(usize, usize),
    ControlledUnitary(ControlledUnitary<T>),
}

impl<T: Real> Gate<T> {
    /// Qubits touched by the gate, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Phase(q, _) => vec![*q],
            Gate::CX { control, target } | Gate::CPhase { control, target, .. } => {
                vec![*control, *target]
            }
            Gate::CCX { controls, target } => vec![controls[0], controls[1], *target],
            Gate::Mcx { controls, target } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(std::iter::once(*target))
                .collect(),
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::ControlledUnitary(cu) => std::iter::once(cu.control).chain(cu.target()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Gate::Phase(q, theta) => Gate::Phase(*q, -*theta),
            Gate::CPhase {
                control,
                target,
                theta,
            } => Gate::CPhase {
                control: *control,
                target: *target,
                theta: -*theta,
            },
            Gate::ControlledUnitary(cu) => Gate::ControlledUnitary(cu.adjoint()),
            other => other.clone(),
        }
    }

    pub(crate) fn validate(&self, qubit_count: usize) -> Result<(), SimError> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= qubit_count {
                return Err(SimError::IndexOutOfRange {
                    index: q,
                    qubits: qubit_count,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateIndex { index: q });
            }
        }
        Ok(())
    }
}

/// Ordered gate list.
#[derive(Clone, Debug, Default)]
pub struct Circuit<T> {
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new() -> Self {
        Self { gates: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate<T>) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn append(&mut self, other: &Circuit<T>) -> &mut Self {
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Reversed sequence of adjoint gates.
    pub fn inverse(&self) -> Self {
        Self {
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Number of qubits needed to hold every index used.
    pub fn min_width(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.qubits())
            .max()
            .map_or(0, |q| q + 1)
    }
}

impl<T: Real> FromIterator<Gate<T>> for Circuit<T> {
    fn from_iter<I: IntoIterator<Item = Gate<T>>>(iter: I) -> Self {
        Self {
            gates: iter.into_iter().collect(),
        }
    }
}

impl<T: Real> Extend<Gate<T>> for Circuit<T> {
    fn extend<I: IntoIterator<Item = Gate<T>>>(&mut self, iter: I) {
        self.gates.extend(iter);
    }
}

#[inline]
pub(crate) fn phase<T: Real>(theta: T) -> Complex<T> {
    Complex::from_polar(T::one(), theta)
}
