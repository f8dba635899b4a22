//! Saturating 16-bit arithmetic primitives shared by every neuron update.

/// One step of power-of-two exponential decay on a 16-bit state value.
///
/// Returns `value - (value >> dash)` using an arithmetic shift, i.e. the
/// retained fraction is `1 - 2^(-dash)` per step. `dash = 0` clears the
/// state entirely (retention 0, time constant equal to the step). Negative
/// values shift as floor division by `2^dash`.
#[inline]
pub fn decay16(value: i16, dash: u8) -> i16 {
    debug_assert!(dash <= 15, "dash out of range: {dash}");
    value - (value >> dash)
}

/// Saturating addition of a 32-bit accumulation into a 16-bit state value.
#[inline]
pub fn sat_add16(a: i16, b: i32) -> i16 {
    (a as i64 + b as i64).clamp(i16::MIN as i64, i16::MAX as i64) as i16
}
