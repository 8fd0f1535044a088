//! Gate-level statevector simulator.
//!
//! Qubit `q` is bit `q` of the basis index; registers are little-endian.

mod gate;
mod layout;
mod measure;
mod state;

pub use gate::{Circuit, Control, ControlledUnitary, Gate, UNITARY_TOLERANCE};
pub use layout::{Register, RegisterLayout};
pub use measure::{post_select, sample_measurements, MeasurementOutcome, POST_SELECT_TOLERANCE};
pub use state::StateVector;

use thiserror::Error;

/// Widest register the simulator will allocate (2^26 complex amplitudes ≈ 1 GiB in f64).
pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("qubit index {index} used twice in one gate")]
    DuplicateIndex { index: usize },
    #[error("matrix is not unitary (max defect {defect:e})")]
    NonUnitary { defect: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot prepare a state from the zero vector")]
    ZeroVector,
    #[error("post-selection has zero probability")]
    ZeroProbability,
    #[error("{requested} qubits exceed the simulator cap of {max}")]
    WidthExceeded { requested: usize, max: usize },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("register `{name}` declared twice")]
    DuplicateRegister { name: String },
    #[error("value {value} does not fit register `{name}` of {width} qubits")]
    ValueOutOfRange { name: String, value: usize, width: usize },
    #[error("shot count must be at least 1")]
    NoShots,
}
