use super::{ArithmeticCircuit, QarithError, ReversibleGate};
use crate::qsim::Control;

/// Flip `flag` iff the `product_width`-bit value is at least `2^exponent`.
///
/// Against a power of two the comparison reduces to an OR of the bits at
/// positions ≥ `exponent`: X on the flag, then a zero-controlled X that
/// restores it when all those bits are clear.
///
/// Local layout: product = 0..product_width, flag = product_width.
pub fn build_comparator_pow2(
    product_width: usize,
    exponent: usize,
) -> Result<ArithmeticCircuit, QarithError> {
    if exponent == 0 || exponent > product_width {
        return Err(QarithError::InvalidThreshold {
            exponent,
            width: product_width,
        });
    }
    let flag = product_width;
    let mut circ = ArithmeticCircuit::new(product_width + 1);
    circ.operand("p", 0..product_width, false);
    circ.operand("flag", flag..flag + 1, false);
    if exponent < product_width {
        circ.push(ReversibleGate::x(flag));
        circ.push(ReversibleGate {
            controls: (exponent..product_width).map(Control::zero).collect(),
            target: flag,
        });
    }
    Ok(circ)
}
