//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written against [`Real`], which is implemented for `f32`
//! and `f64`. The linear-algebra modules lean on `nalgebra`, so the trait is
//! anchored on [`RealField`] (itself built from `num-traits` numeric traits)
//! rather than on `num_traits::Float`, whose method names would collide.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar type: `f32` or `f64`.
pub trait Real:
    RealField + Copy + ToPrimitive + Debug + Display + Serialize + DeserializeOwned + Send + Sync
{
    /// Machine epsilon of the underlying representation.
    fn epsilon() -> Self;
}

impl Real for f32 {
    fn epsilon() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn epsilon() -> Self {
        f64::EPSILON
    }
}

/// Lossy conversion of a literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Widen a working scalar to `f64` (for reporting and RNG comparisons).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// `1 - e^{-x}` evaluated without cancellation for small `x`.
#[inline]
pub fn one_minus_exp_neg<T: Real>(x: T) -> T {
    -(-x).exp_m1()
}

/// `|z|` without the `Float` bound `Complex::norm` requires.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}
