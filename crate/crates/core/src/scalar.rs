//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Tolerances quoted for double precision are passed through [`Real::tol`],
/// which widens them to a few hundred ulps for single precision.
pub trait Real:
    Float + FloatConst + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self;

    /// Converts to `f64` for reporting.
    fn as_f64(self) -> f64;

    /// A tolerance no tighter than what the type can resolve.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn quarter() -> Self {
        Self::lit(0.25)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// `ln(cosh x)` without overflow for large `|x|`.
pub(crate) fn ln_cosh<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (-(T::two() * a)).exp().ln_1p() - T::LN_2()
}

/// `ln(e^a + e^b)` without overflow.
pub(crate) fn log_add_exp<T: Real>(a: T, b: T) -> T {
    let m = a.max(b);
    if m == T::neg_infinity() {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `x·log₂x` with the `0·log0 = 0` convention; values below `1e-15` contribute nothing.
pub(crate) fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::lit(1e-15) {
        T::zero()
    } else {
        x * x.log2()
    }
}
