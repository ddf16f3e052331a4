//! Floating-point scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used by coefficients, transfer matrices and sections.
///
/// Implemented for `f32` and `f64`. The associated thresholds stand in for
/// the double-precision constants (`1e-300` pivot floor, `1e300` growth
/// guard) on narrower types.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Smallest pivot magnitude kept by the Sturm recursion.
    const PIVOT_FLOOR: Self;
    /// Solution magnitude at which forward propagation gives up.
    const GROWTH_GUARD: Self;

    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    #[inline]
    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).unwrap_or_else(Self::infinity)
    }
}

impl Scalar for f64 {
    const PIVOT_FLOOR: Self = 1e-300;
    const GROWTH_GUARD: Self = 1e300;
}

impl Scalar for f32 {
    const PIVOT_FLOOR: Self = 1e-37;
    const GROWTH_GUARD: Self = 1e37;
}
