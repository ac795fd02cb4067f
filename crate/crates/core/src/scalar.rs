//! Floating-point scalar abstraction.
//!
//! All numerical code in this crate is written against [`Real`], so the same
//! pipeline runs in `f32` or `f64`. Integer-exact code (the homology module)
//! is generic over [`num_integer::Integer`] instead.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar: f32 or f64
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + std::fmt::LowerExp
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn czero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

/// Integer power of a complex number by repeated multiplication.
pub(crate) fn cpowi<T: Real>(z: Cx<T>, n: usize) -> Cx<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..n {
        acc = acc * z;
    }
    acc
}
