//! Scalar abstraction: the floating-point type the analytical and
//! linear-algebra code is generic over.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
///
/// Extends `num_traits::Float` with the complementary error function, which
/// the Gaussian tail probability needs and `Float` does not provide.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Lossy conversion from `f64`, for constants.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }
}

impl Scalar for f64 {
    #[inline]
    fn erfc(self) -> f64 {
        libm::erfc(self)
    }
}

impl Scalar for f32 {
    #[inline]
    fn erfc(self) -> f32 {
        libm::erfcf(self)
    }
}
