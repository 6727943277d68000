//! Scalar abstraction: all model computations are generic over `f32`/`f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the crate.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy + Default {
    /// Convert an `f64` constant, truncating precision if necessary.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to any Scalar")
    }

    /// Convert to `f64`, for reporting and distribution lookups.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl<T> Scalar for T where T: RealField + FromPrimitive + ToPrimitive + Copy + Default {}
