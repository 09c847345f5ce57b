//! Floating-point abstraction for the numerical kernels.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type the solvers and statistics are generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; exact for grid spacings built from
    /// power-of-two roughness scales.
    fn from_f64_c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("f64 conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand used throughout the crate for numeric literals.
pub fn sc<T: Scalar>(x: f64) -> T {
    T::from_f64_c(x)
}
