use std::fmt;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the numerics are generic over.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + fmt::Display + fmt::Debug + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest magnitude the scalar can hold before `is_finite` fails.
    fn finite_max() -> Self;
}

impl Real for f32 {
    fn finite_max() -> Self {
        f32::MAX
    }
}

impl Real for f64 {
    fn finite_max() -> Self {
        f64::MAX
    }
}

/// Modulus of a complex number over any [`Real`].
#[inline]
pub fn cabs<T: Real>(z: num_complex::Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
