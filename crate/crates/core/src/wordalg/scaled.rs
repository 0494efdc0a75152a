//! Exact polynomials as Gaussian-integer numerators over one common
//! denominator, for the verifier's inner loop.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Letter, OperatorExpr};
use crate::series::{ExactSeries, GaussianRational, PowerSeries};

type GInt = Complex<BigInt>;

#[derive(Clone, Debug)]
pub(crate) struct ScaledPoly {
    num: Vec<GInt>,
    den: BigInt,
}

fn lcm_upto(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

impl ScaledPoly {
    pub(crate) fn from_exact(s: &ExactSeries) -> Self {
        let mut den = BigInt::one();
        for c in s.coeffs() {
            den = den.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let lift = |q: &BigRational| q.numer() * (&den / q.denom());
        let num = s
            .coeffs()
            .iter()
            .map(|c| Complex::new(lift(&c.re), lift(&c.im)))
            .collect();
        Self { num, den }
    }

    pub(crate) fn to_exact(&self) -> ExactSeries {
        let q = |n: &BigInt| BigRational::new(n.clone(), self.den.clone());
        PowerSeries::polynomial(
            self.num
                .iter()
                .map(|c| GaussianRational::new(q(&c.re), q(&c.im)))
                .collect(),
        )
    }

    fn zero() -> Self {
        Self {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    /// Divides out the common content of the numerators and denominator.
    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(&c.re).gcd(&c.im);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                c.re /= &g;
                c.im /= &g;
            }
            self.den /= &g;
        }
    }

    fn derivative(&self) -> Self {
        let num = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self {
            num,
            den: self.den.clone(),
        }
    }

    fn antiderivative(&self) -> Self {
        let l = lcm_upto(self.num.len());
        let mut num = Vec::with_capacity(self.num.len() + 1);
        num.push(GInt::zero());
        for (k, c) in self.num.iter().enumerate() {
            num.push(c * (&l / BigInt::from(k + 1)));
        }
        let mut out = Self {
            num,
            den: &self.den * l,
        };
        out.reduce();
        out
    }

    fn mul(&self, other: &Self) -> Self {
        if self.num.is_empty() || other.num.is_empty() {
            return Self::zero();
        }
        let mut num = vec![GInt::zero(); self.num.len() + other.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        Self {
            num,
            den: &self.den * &other.den,
        }
    }

    fn pi0(&self) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.num.first_mut() {
            *c = GInt::zero();
        }
        out
    }

    /// `self + c * other`
    fn add_scaled(&self, other: &Self, c: &BigRational) -> Self {
        let oden = &other.den * c.denom();
        let den = self.den.lcm(&oden);
        let fa = &den / &self.den;
        let fb = (&den / &oden) * c.numer();
        let n = self.num.len().max(other.num.len());
        let zero = GInt::zero();
        let num = (0..n)
            .map(|k| self.num.get(k).unwrap_or(&zero) * &fa + other.num.get(k).unwrap_or(&zero) * &fb)
            .collect();
        let mut out = Self { num, den };
        out.reduce();
        out
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        let zero = GInt::zero();
        let n = self.num.len().max(other.num.len());
        (0..n).all(|k| self.num.get(k).unwrap_or(&zero) * &other.den == other.num.get(k).unwrap_or(&zero) * &self.den)
    }
}

/// `expr` applied to `f` with symbol `g`, sharing partial applications
/// between terms with a common right factor.
pub(crate) fn apply_scaled(expr: &OperatorExpr, g: &ScaledPoly, f: &ScaledPoly) -> ScaledPoly {
    let dg = g.derivative();
    let f0 = f.pi0();
    let mut cache: HashMap<(bool, Vec<Letter>), ScaledPoly> = HashMap::new();
    let mut total = ScaledPoly::zero();
    for (term, coeff) in expr.terms() {
        let letters = term.word.letters();
        let mut start = letters.len();
        let mut acc = if term.pi0 { f0.clone() } else { f.clone() };
        for s in 0..letters.len() {
            if let Some(hit) = cache.get(&(term.pi0, letters[s..].to_vec())) {
                start = s;
                acc = hit.clone();
                break;
            }
        }
        for s in (0..start).rev() {
            acc = match letters[s] {
                Letter::M => acc.mul(g),
                Letter::S => acc.derivative().mul(g).antiderivative(),
                Letter::T => acc.mul(&dg).antiderivative(),
            };
            cache.insert((term.pi0, letters[s..].to_vec()), acc.clone());
        }
        total = total.add_scaled(&acc, coeff);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::apply_expr;
    use crate::wordalg::{parse_expr, random_polynomial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_series_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for text in ["T", "S", "M", "3/2 S T^2 - T Pi0", "M S T M", "Pi0", "2"] {
            let e = parse_expr(text).unwrap();
            let g = random_polynomial(&mut rng, 6, false);
            let f = random_polynomial(&mut rng, 6, false);
            let want = apply_expr(&e, &g, &f).unwrap();
            let got = apply_scaled(&e, &ScaledPoly::from_exact(&g), &ScaledPoly::from_exact(&f));
            assert_eq!(got.to_exact(), want, "{text}");
            assert!(got.same_as(&ScaledPoly::from_exact(&want)));
        }
    }
}
