//! Scalar abstraction: every numeric routine in this crate is generic over a
//! floating-point type implementing [`Real`] (in practice `f32` or `f64`).

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library computes with.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lift an `f64` constant into the working scalar type.
#[inline]
pub fn cst<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("f64 constant must convert into the scalar type")
}

/// Lossy view of a scalar as `f64`, for diagnostics and error payloads.
#[inline]
pub fn as_f64<F: Real>(v: F) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
