use serde::{Deserialize, Serialize};

use super::QlssError;
use crate::Real;

/// Largest supported bit count; mantissas and counts stay within `u64`.
pub const MAX_BITS: u32 = 62;

/// `m`-bit eigenvalue encoding with `k = ⌊m/2⌋` fractional and `⌈m/2⌉`
/// integer bits. Signed formats use two's complement over the same `m` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FixedPointFormat {
    m: u32,
    signed: bool,
}

impl FixedPointFormat {
    pub fn new(m: u32, signed: bool) -> Result<Self, QlssError> {
        if m == 0 || m > MAX_BITS || (signed && m < 2) {
            return Err(QlssError::InvalidConfig(format!(
                "m = {m} outside the supported range{}",
                if signed { " for signed encodings (2..=62)" } else { " (1..=62)" }
            )));
        }
        Ok(Self { m, signed })
    }

    pub fn unsigned(m: u32) -> Result<Self, QlssError> {
        Self::new(m, false)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Fractional bits.
    pub fn k(&self) -> u32 {
        self.m / 2
    }

    /// Integer bits.
    pub fn integer_bits(&self) -> u32 {
        self.m - self.k()
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    /// `2^m`.
    pub fn modulus(&self) -> u64 {
        1u64 << self.m
    }

    /// Exclusive upper bound on the mantissa `|λ̃|·2^k`.
    pub fn mantissa_limit(&self) -> u64 {
        if self.signed {
            1u64 << (self.m - 1)
        } else {
            1u64 << self.m
        }
    }

    /// Grid step `2^{-k}`.
    pub fn resolution<T: Real>(&self) -> T {
        T::lit(2.0).powi(-(self.k() as i32))
    }

    /// `2^{⌈m/2⌉}`: magnitudes at or beyond this cannot be quantized.
    pub fn range_bound<T: Real>(&self) -> T {
        T::lit(2.0).powi(self.integer_bits() as i32)
    }

    /// Largest magnitude a prescaled spectrum may reach: `(1 − 2^{-k})·2^{⌈m/2⌉ − signed}`.
    pub fn prescale_target<T: Real>(&self) -> T {
        let top = self.integer_bits() as i32 - i32::from(self.signed);
        (T::one() - self.resolution::<T>()) * T::lit(2.0).powi(top)
    }

    /// Accuracy scale `2^{-m/2}`.
    pub fn error_bound<T: Real>(&self) -> T {
        T::lit(2.0).powf(-T::from_count(self.m as usize) / T::lit(2.0))
    }

    /// QPE evolution time `2π / 2^{⌈m/2⌉}`, which makes the phase estimate equal `λ·2^k`.
    pub fn evolution_time<T: Real>(&self) -> T {
        T::TAU() / self.range_bound::<T>()
    }

    /// Value of an `m`-bit register word (two's complement when signed).
    pub fn decode_word<T: Real>(&self, word: u64) -> T {
        let word = word & (self.modulus() - 1);
        let v = if self.signed && word >= (1u64 << (self.m - 1)) {
            -(T::from_u64(self.modulus() - word).expect("fits"))
        } else {
            T::from_u64(word).expect("fits")
        };
        v * self.resolution::<T>()
    }
}
