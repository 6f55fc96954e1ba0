//! Scalar traits shared by the exact and the floating-point layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num::complex::Complex;
use num::traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Coefficient ring for the exact combinatorics (rationals, integers, floats).
pub trait Ring: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Ring for T where T: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

/// Real floating-point type backing the analytic layer.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `R`.
#[inline]
pub fn lit<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("literal representable in target float")
}

#[inline]
pub fn re<R: Real>(v: R) -> Complex<R> {
    Complex::new(v, R::zero())
}

/// Relative tolerance for internal consistency checks: 1e-12 in double
/// precision, a few thousand ulps otherwise.
pub fn consistency_tol<R: Real>() -> R {
    let scaled = R::epsilon() * lit(4096.0);
    scaled.max(lit(1e-12))
}

pub(crate) fn factorial<R: Real>(n: usize) -> R {
    (1..=n).fold(R::one(), |acc, i| acc * lit::<R>(i as f64))
}

pub(crate) fn binomial<R: Real>(n: usize, k: usize) -> R {
    if k > n {
        return R::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(R::one(), |acc, i| acc * lit::<R>((n - i) as f64) / lit::<R>((i + 1) as f64))
}

/// Integer power of a ring element by repeated multiplication.
pub fn pow<T: Ring>(base: &T, exp: usize) -> T {
    let mut out = T::one();
    for _ in 0..exp {
        out = out * base.clone();
    }
    out
}
