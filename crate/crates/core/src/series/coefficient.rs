use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustfft::FftPlanner;

use super::gaussian::{ratio_to_f64, GaussianRational};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Coefficient field of a [`super::PowerSeries`].
///
/// Two implementations exist: [`GaussianRational`] for exact verification and
/// `Complex<F>` for numerical work on transcendental symbols.
pub trait Coefficient: Clone + PartialEq + Debug + Zero + Send + Sync {
    const EXACT: bool;

    fn from_integer(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;

    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self);
    fn sub_ref(&self, other: &Self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_int(&self, n: i64) -> Self;
    fn div_int(&self, n: i64) -> Self;

    /// Modulus as `f64`; used for tail-mass diagnostics only.
    fn magnitude(&self) -> f64;
    fn to_complex<F: Real>(&self) -> Complex<F>;

    /// First `len` coefficients of the Cauchy product of `a` and `b`.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        naive_convolve(a, b, len)
    }
}

pub(crate) fn naive_convolve<C: Coefficient>(a: &[C], b: &[C], len: usize) -> Vec<C> {
    let len = len.min((a.len() + b.len()).saturating_sub(1));
    let mut out = vec![C::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j].add_product(ai, bj);
        }
    }
    out
}

impl Coefficient for GaussianRational {
    const EXACT: bool = true;

    fn from_integer(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        GaussianRational::real(q.clone())
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        GaussianRational::add_product(self, a, b)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn mul_int(&self, n: i64) -> Self {
        let q = BigRational::from_integer(n.into());
        self.scale(&q)
    }
    fn div_int(&self, n: i64) -> Self {
        let q = BigRational::new(1.into(), n.into());
        self.scale(&q)
    }
    fn magnitude(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }
    fn to_complex<F: Real>(&self) -> Complex<F> {
        Complex::new(lit(ratio_to_f64(&self.re)), lit(ratio_to_f64(&self.im)))
    }

    /// Clears denominators, convolves Gaussian integers and reduces each
    /// output coefficient once.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let len = len.min((a.len() + b.len()).saturating_sub(1));
        let (na, da) = integer_parts(a);
        let (nb, db) = integer_parts(b);
        let mut re = vec![BigInt::zero(); len];
        let mut im = vec![BigInt::zero(); len];
        for (i, (ar, ai)) in na.iter().enumerate().take(len) {
            if ar.is_zero() && ai.is_zero() {
                continue;
            }
            for (j, (br, bi)) in nb.iter().enumerate().take(len - i) {
                re[i + j] += ar * br - ai * bi;
                im[i + j] += ar * bi + ai * br;
            }
        }
        let den = da * db;
        re.into_iter()
            .zip(im)
            .map(|(r, i)| GaussianRational::new(BigRational::new(r, den.clone()), BigRational::new(i, den.clone())))
            .collect()
    }
}

/// Numerators over the common denominator of all real and imaginary parts.
fn integer_parts(a: &[GaussianRational]) -> (Vec<(BigInt, BigInt)>, BigInt) {
    let mut den = BigInt::one();
    for c in a {
        den = den.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let lift = |q: &BigRational| q.numer() * (&den / q.denom());
    let nums = a.iter().map(|c| (lift(&c.re), lift(&c.im))).collect();
    (nums, den)
}

/// Below this many multiply-adds the direct product beats the FFT.
const FFT_THRESHOLD: usize = 64 * 64;

impl<F: Real> Coefficient for Complex<F> {
    const EXACT: bool = false;

    fn from_integer(n: i64) -> Self {
        Complex::new(F::from_i64(n).expect("i64 representable"), F::zero())
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(lit(ratio_to_f64(q)), F::zero())
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self = *self + *a * *b;
    }
    fn sub_ref(&self, other: &Self) -> Self {
        *self - *other
    }
    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }
    fn neg_ref(&self) -> Self {
        -*self
    }
    fn mul_int(&self, n: i64) -> Self {
        *self * F::from_i64(n).expect("i64 representable")
    }
    fn div_int(&self, n: i64) -> Self {
        *self / F::from_i64(n).expect("i64 representable")
    }
    fn magnitude(&self) -> f64 {
        to_f64(self.norm())
    }
    fn to_complex<G: Real>(&self) -> Complex<G> {
        Complex::new(lit(to_f64(self.re)), lit(to_f64(self.im)))
    }

    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let len = len.min((a.len() + b.len()).saturating_sub(1));
        let a = &a[..a.len().min(len)];
        let b = &b[..b.len().min(len)];
        if a.len().saturating_mul(b.len()) <= FFT_THRESHOLD {
            return naive_convolve(a, b, len);
        }
        fft_convolve(a, b, len)
    }
}

fn fft_convolve<F: Real>(a: &[Complex<F>], b: &[Complex<F>], len: usize) -> Vec<Complex<F>> {
    let size = (a.len() + b.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::<F>::new();
    let forward: Arc<dyn rustfft::Fft<F>> = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);
    let mut fa = vec![Complex::zero(); size];
    let mut fb = vec![Complex::zero(); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * *y;
    }
    inverse.process(&mut fa);
    let scale = F::one() / from_usize::<F>(size);
    fa.truncate(len);
    for x in fa.iter_mut() {
        *x = *x * scale;
    }
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_product_matches_direct_product() {
        let a: Vec<Complex<f64>> = (0..300)
            .map(|k| Complex::new((k as f64 * 0.7).sin(), (k as f64 * 0.3).cos()))
            .collect();
        let b: Vec<Complex<f64>> = (0..200)
            .map(|k| Complex::new(1.0 / (k as f64 + 1.0), -0.5 / (k as f64 + 2.0)))
            .collect();
        let direct = naive_convolve(&a, &b, 400);
        let fast = <Complex<f64> as Coefficient>::convolve(&a, &b, 400);
        assert_eq!(direct.len(), fast.len());
        for (x, y) in direct.iter().zip(&fast) {
            assert!((x - y).norm() < 1e-11);
        }
    }
}
