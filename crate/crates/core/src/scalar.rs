//! Scalar abstraction shared by every module.
//!
//! All state algebra is written against [`Real`], implemented for `f32` and
//! `f64`. The two tolerance levels scale with the precision of the type:
//! `exact_tol` guards quantities that are exact up to rounding (traces,
//! normalisation), `invariant_tol` guards composed closed-form results.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

pub trait Real:
    'static
    + Send
    + Sync
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
{
    /// Tolerance for results that are exact up to rounding.
    fn exact_tol() -> Self;
    /// Tolerance for invariants of composed closed-form computations.
    fn invariant_tol() -> Self;

    /// Converts an `f64` literal. Every `f64` is representable (possibly
    /// rounded) in the implementing types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }
}

impl Real for f64 {
    fn exact_tol() -> Self {
        1e-12
    }
    fn invariant_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn exact_tol() -> Self {
        1e-5
    }
    fn invariant_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude or matrix entry.
pub type ComplexScalar<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn c_re<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn half<T: Real>() -> T {
    T::lit(0.5)
}

#[inline]
pub(crate) fn two<T: Real>() -> T {
    T::lit(2.0)
}
