//! Generic scalar type for all numerics in this crate.
//!
//! Everything downstream is written against [`Real`] so the same code runs
//! at `f32` or `f64`. The test suites and the CLI use the `f64` aliases
//! exported from the crate root; the tolerances quoted there assume `f64`.

use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts to Real")
    }

    /// Convert to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("Real converts to f64")
    }

    #[inline]
    fn half(self) -> Self {
        self / Self::of(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(2.0f64.half(), 1.0);
    }
}
