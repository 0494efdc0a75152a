//! Truncated Taylor series and exact action of the paraproducts on them.
//!
//! With `f = sum a_k z^k` and `g = sum b_k z^k`:
//!
//! * `T_g f = int_0^z f g'`
//! * `S_g f = int_0^z f' g`
//! * `M_g f = f g`
//! * `Pi0 f = f - f(0)`
//!
//! Polynomials (marked [`Truncation::Exact`]) are closed under all four, so
//! over [`GaussianRational`] this module is a zero-tolerance oracle for the
//! rewriting in [`crate::wordalg`]. Non-polynomial inputs carry a common
//! truncation degree `N`; each operator is correct through degree `N` given
//! inputs correct through `N`, so the degree is preserved.

mod coefficient;
mod gaussian;
mod json;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;
use thiserror::Error;

pub use coefficient::Coefficient;
pub use gaussian::GaussianRational;
pub use json::{exact_series_from_json, exact_series_to_json};

use crate::scalar::{lit, Real};
use crate::wordalg::{Letter, OperatorExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation degrees differ ({left} vs {right}); bring both series to a common degree first")]
    TruncationMismatch { left: usize, right: usize },
    #[error("malformed series JSON: {0}")]
    Json(String),
}

/// How many coefficients of a series are meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// The coefficient list is the whole function (a polynomial).
    Exact,
    /// Coefficients are known through degree `N`; the rest is unknown.
    At(usize),
}

impl Truncation {
    fn combine(self, other: Truncation) -> Result<Truncation, SeriesError> {
        match (self, other) {
            (Truncation::Exact, t) | (t, Truncation::Exact) => Ok(t),
            (Truncation::At(a), Truncation::At(b)) if a == b => Ok(Truncation::At(a)),
            (Truncation::At(a), Truncation::At(b)) => Err(SeriesError::TruncationMismatch { left: a, right: b }),
        }
    }

    /// Number of coefficients a result may hold, or `None` when unbounded.
    fn capacity(self) -> Option<usize> {
        match self {
            Truncation::Exact => None,
            Truncation::At(n) => Some(n + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
    truncation: Truncation,
}

/// Exact series over `Q(i)`.
pub type ExactSeries = PowerSeries<GaussianRational>;
/// Floating point series.
pub type ComplexSeries<F> = PowerSeries<Complex<F>>;

impl<C: Coefficient> PowerSeries<C> {
    pub fn polynomial(coeffs: Vec<C>) -> Self {
        let mut s = Self {
            coeffs,
            truncation: Truncation::Exact,
        };
        s.trim();
        s
    }

    pub fn truncated(mut coeffs: Vec<C>, degree: usize) -> Self {
        coeffs.truncate(degree + 1);
        let mut s = Self {
            coeffs,
            truncation: Truncation::At(degree),
        };
        s.trim();
        s
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(C::from_integer(1))
    }

    pub fn constant(c: C) -> Self {
        Self::polynomial(vec![c])
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = C::from_integer(1);
        Self::polynomial(coeffs)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation == Truncation::Exact
    }

    /// Index of the last nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn value_at_zero(&self) -> C {
        self.coeff(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn with(coeffs: Vec<C>, truncation: Truncation) -> Self {
        let mut coeffs = coeffs;
        if let Some(cap) = truncation.capacity() {
            coeffs.truncate(cap);
        }
        let mut s = Self { coeffs, truncation };
        s.trim();
        s
    }

    /// Re-truncates at degree `n` (never extends knowledge).
    pub fn truncate_to(&self, n: usize) -> Self {
        let t = match self.truncation {
            Truncation::Exact => Truncation::At(n),
            Truncation::At(m) => Truncation::At(m.min(n)),
        };
        Self::with(self.coeffs.clone(), t)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let t = self.truncation.combine(other.truncation)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Ok(Self::with(coeffs, t))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::with(self.coeffs.iter().map(|c| c.neg_ref()).collect(), self.truncation)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::with(self.coeffs.iter().map(|a| a.mul_ref(c)).collect(), self.truncation)
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let t = self.truncation.combine(other.truncation)?;
        let full = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let len = t.capacity().map_or(full, |cap| cap.min(full));
        Ok(Self::with(C::convolve(&self.coeffs, &other.coeffs, len), t))
    }

    /// `f'`. A truncation at `N` becomes one at `N - 1`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_int(k as i64))
            .collect();
        let t = match self.truncation {
            Truncation::Exact => Truncation::Exact,
            Truncation::At(n) => Truncation::At(n.saturating_sub(1)),
        };
        Self::with(coeffs, t)
    }

    /// `int_0^z f`. A truncation at `N` becomes one at `N + 1`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c.div_int(k as i64 + 1)));
        let t = match self.truncation {
            Truncation::Exact => Truncation::Exact,
            Truncation::At(n) => Truncation::At(n + 1),
        };
        Self::with(coeffs, t)
    }

    /// `f - f(0)`
    pub fn pi0(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c0) = coeffs.first_mut() {
            *c0 = C::zero();
        }
        Self::with(coeffs, self.truncation)
    }

    /// Product limited to `len` coefficients; used by the integral operators
    /// where only the first `N` coefficients of the integrand matter.
    fn mul_limited(&self, other: &Self, t: Truncation, integrand_degree: Option<usize>) -> Vec<C> {
        let full = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let len = integrand_degree.map_or(full, |d| full.min(d + 1));
        C::convolve(&self.coeffs, &other.coeffs, len)
            .into_iter()
            .take(t.capacity().unwrap_or(usize::MAX))
            .collect()
    }

    /// `T_g f = int_0^z f g'`
    pub fn apply_t(g: &Self, f: &Self) -> Result<Self, SeriesError> {
        let t = f.truncation.combine(g.truncation)?;
        let integrand_degree = t.capacity().map(|cap| cap.saturating_sub(2));
        let dg = g.derivative();
        let prod = f.mul_limited(&dg, Truncation::Exact, integrand_degree);
        Ok(Self::with(Self::polynomial(prod).antiderivative().coeffs, t))
    }

    /// `S_g f = int_0^z f' g`
    pub fn apply_s(g: &Self, f: &Self) -> Result<Self, SeriesError> {
        let t = f.truncation.combine(g.truncation)?;
        let integrand_degree = t.capacity().map(|cap| cap.saturating_sub(2));
        let df = f.derivative();
        let prod = df.mul_limited(g, Truncation::Exact, integrand_degree);
        Ok(Self::with(Self::polynomial(prod).antiderivative().coeffs, t))
    }

    /// `M_g f = g f`
    pub fn apply_m(g: &Self, f: &Self) -> Result<Self, SeriesError> {
        f.mul(g)
    }

    pub fn apply_letter(letter: Letter, g: &Self, f: &Self) -> Result<Self, SeriesError> {
        match letter {
            Letter::M => Self::apply_m(g, f),
            Letter::S => Self::apply_s(g, f),
            Letter::T => Self::apply_t(g, f),
        }
    }

    /// Applies a word (leftmost letter last) to `f`.
    pub fn apply_word(letters: &[Letter], g: &Self, f: &Self) -> Result<Self, SeriesError> {
        let mut acc = f.clone();
        for &l in letters.iter().rev() {
            acc = Self::apply_letter(l, g, &acc)?;
        }
        Ok(acc)
    }

    /// Horner evaluation after converting coefficients to `Complex<F>`.
    pub fn eval<F: Real>(&self, z: Complex<F>) -> Complex<F> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z + c.to_complex::<F>())
    }

    /// `(f(z), f'(z))` by a two-row Horner scheme.
    pub fn eval_with_derivative<F: Real>(&self, z: Complex<F>) -> (Complex<F>, Complex<F>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c.to_complex::<F>();
        }
        (p, dp)
    }

    /// Ratio of the l1 mass in the top eighth of the known coefficients,
    /// weighted by `radius^k`, to the total weighted mass.
    pub fn tail_mass(&self, radius: f64) -> f64 {
        let n = match self.truncation {
            Truncation::Exact => return 0.0,
            Truncation::At(n) => n,
        };
        let cut = n - n / 8;
        let mut total = 0.0;
        let mut tail = 0.0;
        let mut w = 1.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let m = c.magnitude() * w;
            total += m;
            if k > cut {
                tail += m;
            }
            w *= radius;
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }
}

impl<F: Real> PowerSeries<Complex<F>> {
    /// Values on the ring `radius * exp(2 pi i j / n)`, `j = 0..n`.
    ///
    /// Coefficients are folded modulo `n` and transformed with one FFT, so
    /// the cost is `O(len + n log n)` instead of `O(len * n)`.
    pub fn eval_ring(&self, radius: F, n: usize, planner: &mut FftPlanner<F>) -> Vec<Complex<F>> {
        self.eval_ring_upto(radius, n, self.coeffs.len(), planner)
    }

    fn eval_ring_upto(&self, radius: F, n: usize, len: usize, planner: &mut FftPlanner<F>) -> Vec<Complex<F>> {
        let mut folded = vec![Complex::zero(); n];
        let mut w = F::one();
        let mut j = 0;
        for c in &self.coeffs[..len] {
            folded[j] = folded[j] + *c * w;
            w = w * radius;
            j += 1;
            if j == n {
                j = 0;
            }
        }
        // sum_k b_k e^{2 pi i k j / n} is an inverse DFT without normalisation.
        planner.plan_fft_inverse(n).process(&mut folded);
        folded
    }

    /// [`Self::eval_ring`] for several radii at most `outer`. Terms whose
    /// contribution is below `1e-18` of the largest weighted coefficient
    /// are skipped on the inner rings.
    pub fn eval_rings(&self, radii: &[F], outer: F, n: usize, planner: &mut FftPlanner<F>) -> Vec<Vec<Complex<F>>> {
        // suffix[k] = max_{j >= k} |c_j| outer^j
        let mut suffix = vec![F::zero(); self.coeffs.len() + 1];
        let mut w = F::one();
        let weighted: Vec<F> = self
            .coeffs
            .iter()
            .map(|c| {
                let m = c.norm() * w;
                w = w * outer;
                m
            })
            .collect();
        for k in (0..weighted.len()).rev() {
            suffix[k] = suffix[k + 1].max(weighted[k]);
        }
        let floor = suffix[0] * lit::<F>(1e-18);
        radii
            .iter()
            .map(|&r| {
                let ratio = r / outer;
                let mut len = self.coeffs.len();
                if ratio < F::one() && floor > F::zero() {
                    // Smallest k with suffix[k] * ratio^k below the floor.
                    let mut pk = F::one();
                    for k in 0..self.coeffs.len() {
                        if suffix[k] * pk < floor {
                            len = k;
                            break;
                        }
                        pk = pk * ratio;
                    }
                }
                self.eval_ring_upto(r, n, len, planner)
            })
            .collect()
    }

    pub fn real_scale(&self, s: F) -> Self {
        Self::with(self.coeffs.iter().map(|c| *c * s).collect(), self.truncation)
    }
}

impl<C: Coefficient> PowerSeries<C> {
    /// Dilation `f(rz)` for real `r` given as a coefficient.
    pub fn dilate_by(&self, r: &C) -> Self {
        let mut w = C::from_integer(1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.mul_ref(&w);
                w = w.mul_ref(r);
                out
            })
            .collect();
        Self::with(coeffs, self.truncation)
    }
}

/// Applies an operator expression to `f` for symbol `g`.
///
/// Terms sharing a right factor reuse the cached partial application, which
/// matters for normal forms `sum c S^a T^b` that share every `T^b` suffix.
pub fn apply_expr<C: Coefficient>(
    expr: &OperatorExpr,
    g: &PowerSeries<C>,
    f: &PowerSeries<C>,
) -> Result<PowerSeries<C>, SeriesError> {
    let f0 = f.pi0();
    let mut cache: HashMap<(bool, Vec<Letter>), PowerSeries<C>> = HashMap::new();
    let mut total = PowerSeries::<C>::with(Vec::new(), f.truncation.combine(g.truncation)?);
    for (term, coeff) in expr.terms() {
        let letters = term.word.letters();
        let base = if term.pi0 { &f0 } else { f };
        // Longest cached suffix first.
        let mut start = letters.len();
        let mut acc = base.clone();
        for s in 0..=letters.len() {
            if let Some(hit) = cache.get(&(term.pi0, letters[s..].to_vec())) {
                start = s;
                acc = hit.clone();
                break;
            }
        }
        for s in (0..start).rev() {
            acc = PowerSeries::apply_letter(letters[s], g, &acc)?;
            cache.insert((term.pi0, letters[s..].to_vec()), acc.clone());
        }
        total = total.add(&acc.scale(&C::from_rational(coeff)))?;
    }
    Ok(total)
}

/// Horner evaluation of a series at a complex point.
pub fn ps_eval<C: Coefficient, F: Real>(f: &PowerSeries<C>, z: Complex<F>) -> Complex<F> {
    f.eval(z)
}

/// `(k!/(n+k)!)` as a reduced rational; handy for closed forms in tests.
pub fn falling_ratio(k: u32, n: u32) -> num_rational::BigRational {
    let mut den = num_bigint::BigInt::from(1);
    for j in (k + 1)..=(k + n) {
        den *= j;
    }
    num_rational::BigRational::new(1.into(), den)
}

impl<C: Coefficient + fmt::Display> fmt::Display for PowerSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} z")?,
                _ => write!(f, "{c} z^{k}")?,
            }
        }
        if let Truncation::At(n) = self.truncation {
            write!(f, " + O(z^{})", n + 1)?;
        }
        Ok(())
    }
}
