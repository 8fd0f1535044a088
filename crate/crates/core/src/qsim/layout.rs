use std::ops::Range;

use super::SimError;

/// Named contiguous qubit range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    name: String,
    start: usize,
    len: usize,
}

impl Register {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.len
    }

    /// Qubit index of bit `i` of the register.
    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len, "bit {i} outside register `{}`", self.name);
        self.start + i
    }

    /// Bitmask of the register inside a basis index.
    pub fn mask(&self) -> usize {
        ((1usize << self.len) - 1) << self.start
    }

    /// Value held by the register in basis state `index`.
    pub fn extract(&self, index: usize) -> usize {
        (index & self.mask()) >> self.start
    }
}

/// Registers laid out back to back from qubit 0; they cover the whole width.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub const B: &'static str = "B";
    pub const C: &'static str = "C";
    pub const M1: &'static str = "M1";
    pub const M2: &'static str = "M2";
    pub const ANC_CM: &'static str = "Anc_CM";
    pub const ANC_C: &'static str = "Anc_C";
    pub const ANC_FLAG: &'static str = "Anc_flag";

    pub fn new() -> Self {
        Self::default()
    }

    /// Append a register of `len` qubits after the existing ones.
    pub fn with(mut self, name: &str, len: usize) -> Result<Self, SimError> {
        if self.registers.iter().any(|r| r.name == name) {
            return Err(SimError::DuplicateRegister {
                name: name.to_string(),
            });
        }
        let start = self.qubit_count();
        self.registers.push(Register {
            name: name.to_string(),
            start,
            len,
        });
        Ok(self)
    }

    /// B(n), C(m), M1(m), M2(2m), Anc_CM, Anc_C, Anc_flag: `n + 4m + 3` qubits.
    pub fn for_qlss(n: usize, m: usize) -> Self {
        Self::new()
            .with(Self::B, n)
            .and_then(|l| l.with(Self::C, m))
            .and_then(|l| l.with(Self::M1, m))
            .and_then(|l| l.with(Self::M2, 2 * m))
            .and_then(|l| l.with(Self::ANC_CM, 1))
            .and_then(|l| l.with(Self::ANC_C, 1))
            .and_then(|l| l.with(Self::ANC_FLAG, 1))
            .expect("fixed register names are distinct")
    }

    pub fn qubit_count(&self) -> usize {
        self.registers.iter().map(|r| r.len).sum()
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn get(&self, name: &str) -> Result<&Register, SimError> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| SimError::UnknownRegister(name.to_string()))
    }
}
