//! Reversible integer arithmetic as multi-controlled-X networks.
//!
//! Circuits are built on local qubit indices and embedded into a larger
//! simulator layout with [`ArithmeticCircuit::embed`].

mod adder;
mod comparator;
mod multiplier;

pub use adder::build_adder;
pub use comparator::build_comparator_pow2;
pub use multiplier::build_multiplier;

use std::ops::Range;

use thiserror::Error;

use crate::qsim::{Circuit, Control, Gate};
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QarithError {
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("threshold exponent {exponent} outside 1..={width}")]
    InvalidThreshold { exponent: usize, width: usize },
    #[error("product register must start in |0⟩, found {value}")]
    ProductRegisterNotZero { value: u64 },
    #[error("ancilla `{name}` must start in |0⟩, found {value}")]
    AncillaNotZero { name: String, value: u64 },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("value {value} does not fit register `{name}`")]
    ValueOutOfRange { name: String, value: u64 },
}

/// X on `target` when every control matches its polarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleGate {
    pub controls: Vec<Control>,
    pub target: usize,
}

impl ReversibleGate {
    pub fn x(target: usize) -> Self {
        Self {
            controls: Vec::new(),
            target,
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self {
            controls: vec![Control::one(control)],
            target,
        }
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Self {
            controls: vec![Control::one(c0), Control::one(c1)],
            target,
        }
    }

    fn fires(&self, state: u64) -> bool {
        self.controls
            .iter()
            .all(|c| ((state >> c.qubit) & 1 == 1) == c.on)
    }

    fn to_gate<T: Real>(&self, map: &[usize]) -> Gate<T> {
        let target = map[self.target];
        let all_on = self.controls.iter().all(|c| c.on);
        match (self.controls.as_slice(), all_on) {
            ([], _) => Gate::X(target),
            ([c], true) => Gate::CX {
                control: map[c.qubit],
                target,
            },
            ([c0, c1], true) => Gate::CCX {
                controls: [map[c0.qubit], map[c1.qubit]],
                target,
            },
            (cs, _) => Gate::Mcx {
                controls: cs
                    .iter()
                    .map(|c| Control {
                        qubit: map[c.qubit],
                        on: c.on,
                    })
                    .collect(),
                target,
            },
        }
    }
}

/// Named operand range within an arithmetic circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operand {
    pub name: String,
    pub qubits: Range<usize>,
    /// The circuit's contract requires this operand to start at zero.
    pub must_be_zero: bool,
}

/// Gate list over `width` local qubits with declared operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticCircuit {
    gates: Vec<ReversibleGate>,
    width: usize,
    operands: Vec<Operand>,
    ancillas: Vec<usize>,
}

impl ArithmeticCircuit {
    pub(crate) fn new(width: usize) -> Self {
        Self {
            gates: Vec::new(),
            width,
            operands: Vec::new(),
            ancillas: Vec::new(),
        }
    }

    pub(crate) fn operand(&mut self, name: &str, qubits: Range<usize>, must_be_zero: bool) {
        self.operands.push(Operand {
            name: name.to_string(),
            qubits,
            must_be_zero,
        });
    }

    pub(crate) fn ancilla(&mut self, qubit: usize) {
        self.ancillas.push(qubit);
    }

    pub(crate) fn push(&mut self, gate: ReversibleGate) {
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[ReversibleGate] {
        &self.gates
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn operands(&self) -> &[Operand] {
        &self.operands
    }

    /// Qubits that start and end in |0⟩.
    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn operand_range(&self, name: &str) -> Result<Range<usize>, QarithError> {
        self.operands
            .iter()
            .find(|o| o.name == name)
            .map(|o| o.qubits.clone())
            .ok_or_else(|| QarithError::UnknownRegister(name.to_string()))
    }

    /// Image of a computational basis state (bit `q` is local qubit `q`).
    pub fn eval(&self, state: u64) -> u64 {
        self.gates.iter().fold(state, |s, g| {
            if g.fires(s) {
                s ^ (1 << g.target)
            } else {
                s
            }
        })
    }

    /// Evaluate on named operand values (others zero) and return every operand's output.
    pub fn eval_operands(&self, inputs: &[(&str, u64)]) -> Result<Vec<(String, u64)>, QarithError> {
        let mut state = 0u64;
        for &(name, value) in inputs {
            let r = self.operand_range(name)?;
            if r.len() < 64 && value >> r.len() != 0 {
                return Err(QarithError::ValueOutOfRange {
                    name: name.to_string(),
                    value,
                });
            }
            let op = self.operands.iter().find(|o| o.name == name).expect("found above");
            if op.must_be_zero && value != 0 {
                return Err(if name == multiplier::PRODUCT {
                    QarithError::ProductRegisterNotZero { value }
                } else {
                    QarithError::AncillaNotZero {
                        name: name.to_string(),
                        value,
                    }
                });
            }
            state |= value << r.start;
        }
        let out = self.eval(state);
        Ok(self
            .operands
            .iter()
            .map(|o| {
                let mask = (1u64 << o.qubits.len()) - 1;
                (o.name.clone(), (out >> o.qubits.start) & mask)
            })
            .collect())
    }

    /// Reversed gate list; every gate is self-inverse. Only ancillas keep
    /// the zero-input contract.
    pub fn inverse(&self) -> Self {
        let operands = self
            .operands
            .iter()
            .map(|o| Operand {
                must_be_zero: o.must_be_zero && o.qubits.clone().all(|q| self.ancillas.contains(&q)),
                ..o.clone()
            })
            .collect();
        Self {
            gates: self.gates.iter().rev().cloned().collect(),
            operands,
            ..self.clone()
        }
    }

    /// Same circuit with one extra control on every gate; the control is a new local qubit `width`.
    pub fn controlled(&self) -> Self {
        let c = self.width;
        let mut out = Self {
            gates: self
                .gates
                .iter()
                .map(|g| {
                    let mut controls = vec![Control::one(c)];
                    controls.extend(g.controls.iter().copied());
                    ReversibleGate {
                        controls,
                        target: g.target,
                    }
                })
                .collect(),
            width: self.width + 1,
            ..self.clone()
        };
        out.operand("control", c..c + 1, false);
        out
    }

    /// Simulator gates with local qubit `q` placed on global qubit `map[q]`.
    pub fn embed<T: Real>(&self, map: &[usize]) -> Circuit<T> {
        assert!(map.len() >= self.width, "map covers {} of {} qubits", map.len(), self.width);
        self.gates.iter().map(|g| g.to_gate(map)).collect()
    }
}
