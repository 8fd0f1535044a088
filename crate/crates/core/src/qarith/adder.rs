use super::{ArithmeticCircuit, QarithError, ReversibleGate};
use crate::qsim::Control;

/// Prefix `controls` to a gate.
fn with_controls(controls: &[Control], mut g: ReversibleGate) -> ReversibleGate {
    if !controls.is_empty() {
        let mut cs = controls.to_vec();
        cs.append(&mut g.controls);
        g.controls = cs;
    }
    g
}

/// Ripple-carry addition `b ← a + b` (Cuccaro MAJ/UMA chain) on arbitrary
/// qubit positions, with an optional carry-out XORed into `carry` and
/// every gate additionally conditioned on `controls`.
pub(crate) fn cuccaro_gates(
    a: &[usize],
    b: &[usize],
    ancilla: usize,
    carry: Option<usize>,
    controls: &[Control],
) -> Vec<ReversibleGate> {
    assert_eq!(a.len(), b.len());
    let w = a.len();
    let mut gates = Vec::with_capacity(6 * w + 1);
    let mut push = |g| gates.push(with_controls(controls, g));
    let c_of = |i: usize| if i == 0 { ancilla } else { a[i - 1] };
    for i in 0..w {
        // MAJ(c, b_i, a_i)
        let c = c_of(i);
        push(ReversibleGate::cx(a[i], b[i]));
        push(ReversibleGate::cx(a[i], c));
        push(ReversibleGate::ccx(c, b[i], a[i]));
    }
    if let Some(z) = carry {
        push(ReversibleGate::cx(a[w - 1], z));
    }
    for i in (0..w).rev() {
        // UMA(c, b_i, a_i)
        let c = c_of(i);
        push(ReversibleGate::ccx(c, b[i], a[i]));
        push(ReversibleGate::cx(a[i], c));
        push(ReversibleGate::cx(c, b[i]));
    }
    gates
}

/// `|a⟩|b⟩ → |a⟩|(a+b) mod 2^w⟩`.
///
/// Local layout: `a` = 0..w, `b` = w..2w, ancilla 2w, and with `carry_out`
/// a carry qubit 2w+1 that receives the overflow bit (XOR).
pub fn build_adder(width: usize, carry_out: bool) -> Result<ArithmeticCircuit, QarithError> {
    if width == 0 {
        return Err(QarithError::ZeroWidth);
    }
    let w = width;
    let total = 2 * w + 1 + usize::from(carry_out);
    let mut circ = ArithmeticCircuit::new(total);
    circ.operand("a", 0..w, false);
    circ.operand("b", w..2 * w, false);
    circ.operand("ancilla", 2 * w..2 * w + 1, true);
    circ.ancilla(2 * w);
    if carry_out {
        circ.operand("carry", 2 * w + 1..2 * w + 2, false);
    }
    let a: Vec<usize> = (0..w).collect();
    let b: Vec<usize> = (w..2 * w).collect();
    let carry = carry_out.then_some(2 * w + 1);
    for g in cuccaro_gates(&a, &b, 2 * w, carry, &[]) {
        circ.push(g);
    }
    Ok(circ)
}
