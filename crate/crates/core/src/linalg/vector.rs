//! Helpers on plain complex/real slices.

use num_complex::Complex;
use num_traits::Zero;

use crate::Real;

/// ⟨a, b⟩ = Σ conj(a_i)·b_i.
pub fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm2<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub fn real_norm2<T: Real>(a: &[T]) -> T {
    a.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// `a / ‖a‖₂`, or `None` for the zero vector.
pub fn normalized<T: Real>(a: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let n = norm2(a);
    if n.is_zero() || !n.is_finite() {
        return None;
    }
    Some(a.iter().map(|&z| z / n).collect())
}

pub fn to_complex<T: Real>(a: &[T]) -> Vec<Complex<T>> {
    a.iter().map(|&x| Complex::new(x, T::zero())).collect()
}

pub fn real_parts<T: Real>(a: &[Complex<T>]) -> Vec<T> {
    a.iter().map(|z| z.re).collect()
}

/// ‖a − b‖₂ / ‖b‖₂.
pub fn relative_error<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let diff: Vec<_> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&diff) / norm2(b)
}
