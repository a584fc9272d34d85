//! Scalar abstraction shared by the analytic parts of the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// The closed-form machinery (states, swapping, recursions, chain formulas)
/// is written against this trait. Numerical optimizers and the Monte Carlo
/// engine work in `f64` only.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance of `base`, floored at a few ulps of one so that it stays
    /// meaningful for single precision.
    #[inline]
    fn tolerance(base: f64) -> Self {
        Self::lit(base).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - sqrt(1 - x)` without cancellation for small `x`. Clamps `x` to `[0, 1]`.
    #[inline]
    fn one_minus_sqrt_one_minus(x: Self) -> Self {
        let x = x.max(Self::zero()).min(Self::one());
        x / (Self::one() + (Self::one() - x).sqrt())
    }

    /// Clamps to the unit interval.
    #[inline]
    fn unit_clamp(self) -> Self {
        self.max(Self::zero()).min(Self::one())
    }
}

impl Real for f32 {}
impl Real for f64 {}
