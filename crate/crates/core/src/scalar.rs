//! Scalar abstractions shared by the numeric modules.
//!
//! Everything that integrates, evaluates or takes suprema is written against
//! [`Real`], which is implemented for `f32` and `f64`. Exact work lives in
//! [`crate::series::GaussianRational`] and never touches these types.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar used by geometry, symbols, norms and operator norms.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Default + Sum + Send + Sync
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `F`.
#[inline]
pub fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable")
}

#[inline]
pub fn from_usize<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("usize representable")
}

#[inline]
pub fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn complex_to_f64<F: Real>(z: Complex<F>) -> [f64; 2] {
    [to_f64(z.re), to_f64(z.im)]
}

/// Pairwise (cascade) summation. Order of additions depends only on the input
/// length, so parallel producers that collect into a `Vec` first get
/// reproducible totals.
pub fn pairwise_sum<F: Real>(xs: &[F]) -> F {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().fold(F::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Wraps an angle difference into `(-pi, pi]`.
#[inline]
pub fn wrap_angle<F: Real>(t: F) -> F {
    let two_pi = F::PI() + F::PI();
    let mut w = t % two_pi;
    if w > F::PI() {
        w = w - two_pi;
    } else if w <= -F::PI() {
        w = w + two_pi;
    }
    w
}
