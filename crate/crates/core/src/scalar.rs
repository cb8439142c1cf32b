//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Complex number over the crate's real scalar.
pub type C<T> = Complex<T>;

/// Real floating-point scalar the simulator is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Relative residual accepted from a linear solve: `1e-8` in double
    /// precision, loosened with machine epsilon for narrower types.
    fn solver_tol() -> Self {
        Self::lit(1e-8).max(Self::epsilon() * Self::lit(1e4))
    }

    /// Element-wise tolerance used when validating density matrices.
    fn state_tol(nominal: f64) -> Self {
        Self::lit(nominal).max(Self::epsilon() * Self::lit(1e3))
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `2π·f`, converting an ordinary frequency in Hz to rad/s.
#[inline]
pub fn angular<T: Real>(hz: T) -> T {
    T::TAU() * hz
}

/// `ω / 2π`, converting rad/s back to Hz.
#[inline]
pub fn ordinary<T: Real>(omega: T) -> T {
    omega / T::TAU()
}
