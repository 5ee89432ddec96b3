//! The scalar abstraction every kernel is generic over.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; every constant in the crate goes through here.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Widens to `f64` for node tables and reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A relative tolerance that is attainable at this precision.
    fn default_rel_tol() -> Self {
        let e = Self::epsilon();
        let floor = Self::lit(1e-11);
        (e * Self::lit(1e3)).max(floor)
    }
}

impl Real for f32 {}
impl Real for f64 {}
