//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over (`f32` or `f64`).
///
/// Accuracy contracts quoted in the documentation refer to `f64`; `f32`
/// evaluates the same formulas at single precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts an integer into the scalar type.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar type")
    }

    /// Lossy conversion used for error payloads and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Tolerance used for "is this an integer" tests on user-supplied floats.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Returns `Some(n)` when `x` lies within [`POLE_TOLERANCE`] of the integer `n`.
pub fn near_integer<T: Real>(x: T) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() < T::lit(POLE_TOLERANCE) {
        r.to_i64()
    } else {
        None
    }
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi<T: Real>(x: T) -> T {
    // reduce to [-1, 1] so large arguments keep full precision
    let two = T::lit(2.0);
    let mut r = x - two * (x / two).round();
    if r == T::zero() || r.abs() == T::one() {
        return T::zero();
    }
    if r > T::lit(0.5) {
        r = T::one() - r;
    } else if r < T::lit(-0.5) {
        r = -T::one() - r;
    }
    (T::PI() * r).sin()
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    sin_pi(x + T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0_f64), 0.0);
        assert_eq!(sin_pi(-7.0_f64), 0.0);
        assert_eq!(cos_pi(0.5_f64), 0.0);
        assert!((sin_pi(0.25_f64) - std::f64::consts::FRAC_1_SQRT_2).abs() < 3e-16);
        assert!((sin_pi(1000.25_f64) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((sin_pi(-0.75_f64) + std::f64::consts::FRAC_1_SQRT_2).abs() < 3e-16);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(near_integer(2.0_f64 + 1e-13), Some(2));
        assert_eq!(near_integer(2.0_f64 + 1e-9), None);
        assert_eq!(near_integer(-3.0_f64), Some(-3));
    }
}
