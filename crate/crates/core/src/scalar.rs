//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point type the library computes in (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative round-off slack used for internal consistency assertions.
    const ROUND_OFF: f64;

    /// Converts an `f64` literal. Always succeeds for the two implementors.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_int(k: i64) -> Self {
        <Self as num_traits::NumCast>::from(k).expect("integer representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <f64 as num_traits::NumCast>::from(self).unwrap_or(f64::NAN)
    }

    /// Largest argument for which `exp` stays finite.
    #[inline]
    fn max_exp_arg() -> Self {
        Self::max_value().ln()
    }
}

impl Real for f32 {
    const ROUND_OFF: f64 = 1e-5;
}

impl Real for f64 {
    const ROUND_OFF: f64 = 1e-12;
}
