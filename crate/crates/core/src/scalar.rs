//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real floating point scalar: implemented for `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_index(k: usize) -> Self {
        Self::from_usize(k).expect("index representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// Euler gamma function, evaluated in double precision.
    fn gamma(self) -> Self {
        Self::lit(statrs::function::gamma::gamma(self.as_f64()))
    }

    /// Machine epsilon scaled into a default iterative-solver tolerance.
    fn default_solver_tol() -> Self {
        let floor = Self::lit(1e-12);
        let eps = Self::epsilon() * Self::lit(64.0);
        if eps > floor {
            eps
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_tolerance_tracks_precision() {
        assert_eq!(f64::default_solver_tol(), 1e-12);
        assert!(f32::default_solver_tol() > 1e-6);
    }

    #[test]
    fn gamma_matches_factorial() {
        assert!((Real::gamma(5.0_f64) - 24.0).abs() < 1e-12);
        assert!((Real::gamma(0.5_f64) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
