use super::adder::cuccaro_gates;
use super::{ArithmeticCircuit, QarithError};
use crate::qsim::Control;

pub(crate) const PRODUCT: &str = "p";

/// `|a⟩|x⟩|0⟩_{2w} → |a⟩|x⟩|a·x⟩` by shift-and-add: for every bit `a_i`,
/// a controlled ripple-carry adder adds `x` into `p[i..i+w]` with the carry
/// landing in `p[i+w]`.
///
/// Local layout: `a` = 0..w, `x` = w..2w, `p` = 2w..4w, ancilla 4w.
pub fn build_multiplier(width: usize) -> Result<ArithmeticCircuit, QarithError> {
    if width == 0 {
        return Err(QarithError::ZeroWidth);
    }
    let w = width;
    let anc = 4 * w;
    let mut circ = ArithmeticCircuit::new(4 * w + 1);
    circ.operand("a", 0..w, false);
    circ.operand("x", w..2 * w, false);
    circ.operand(PRODUCT, 2 * w..4 * w, true);
    circ.operand("ancilla", anc..anc + 1, true);
    circ.ancilla(anc);
    let x: Vec<usize> = (w..2 * w).collect();
    for i in 0..w {
        let p: Vec<usize> = (2 * w + i..2 * w + i + w).collect();
        let carry = 2 * w + i + w;
        let carry = (carry < 4 * w).then_some(carry);
        for g in cuccaro_gates(&x, &p, anc, carry, &[Control::one(i)]) {
            circ.push(g);
        }
    }
    Ok(circ)
}
