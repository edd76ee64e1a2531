//! Floating-point abstraction shared by the metric, distance and geometry code.

use num_traits::{Float, FromPrimitive, NumCast};
use std::fmt::{Debug, Display};

/// Real scalar used by the numeric routines: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literal constants.
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("literal representable in scalar type")
    }

    fn from_usize_lossy(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
