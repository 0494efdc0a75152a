//! Analytic symbols `g` on the disc with pointwise values of `g` and `g'`.

mod json;

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

pub use json::{symbol_from_json, symbol_to_json};

use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::series::{Coefficient, ComplexSeries, ExactSeries, GaussianRational, PowerSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("dilation radius {0} must lie in (0, 1)")]
    BadRadius(f64),
    #[error("Blaschke zero {0:?} is not inside the unit disc")]
    ZeroOutsideDisc([f64; 2]),
    #[error("fractional powers need a symbol without zeros in the disc; {0} has zeros")]
    HasZeros(String),
    #[error("point {z:?} is outside the domain of {symbol}")]
    OutsideDomain { symbol: String, z: [f64; 2] },
    #[error("cannot parse symbol: {0}")]
    Syntax(String),
}

/// Polynomial symbol; the exact coefficients are kept next to a float copy
/// used for evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySymbol<F> {
    exact: Vec<GaussianRational>,
    float: Vec<Complex<F>>,
}

impl<F: Real> PolySymbol<F> {
    pub fn exact_coeffs(&self) -> &[GaussianRational] {
        &self.exact
    }

    pub fn coeffs(&self) -> &[Complex<F>] {
        &self.float
    }

    fn eval(&self, z: Complex<F>) -> (Complex<F>, Complex<F>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for c in self.float.iter().rev() {
            dp = dp * z + p;
            p = p * z + *c;
        }
        (p, dp)
    }

    /// All complex zeros with multiplicity (Aberth iteration in double
    /// precision, then Newton polishing).
    pub fn roots(&self) -> Vec<Complex<F>> {
        let c: Vec<Complex<f64>> = self
            .float
            .iter()
            .map(|z| Complex::new(to_f64(z.re), to_f64(z.im)))
            .collect();
        aberth(&c)
            .into_iter()
            .map(|z| Complex::new(lit(z.re), lit(z.im)))
            .collect()
    }

    /// Number of zeros in `|z| < radius`, by the argument principle.
    pub fn zeros_inside(&self, radius: F) -> usize {
        let deg = self.float.len().saturating_sub(1);
        let n = (64 * (deg + 1)).max(512);
        let mut total = F::zero();
        let mut prev = self.eval(Complex::new(radius, F::zero())).0;
        for j in 1..=n {
            let t = F::TAU() * from_usize::<F>(j) / from_usize::<F>(n);
            let v = self.eval(Complex::from_polar(radius, t)).0;
            total = total + (v / prev).arg();
            prev = v;
        }
        let turns = to_f64(total) / std::f64::consts::TAU;
        turns.round().max(0.0) as usize
    }
}

fn horner(c: &[Complex<f64>], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + *a;
    }
    (p, dp)
}

fn aberth(c: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n].norm();
    let bound = 1.0 + c[..n].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| Complex::from_polar(0.5 * bound, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex<f64> = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *r);
            let step = p / dp;
            if step.is_finite() && dp.norm() > 0.0 {
                *r -= step;
            }
        }
    }
    z
}

/// Description of a symbol `g`.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolSpec<F> {
    Polynomial(PolySymbol<F>),
    /// `h(z) = 1 + log(1/(1-z))`, principal branch.
    LogE,
    /// `h^beta` with `h` as in [`SymbolSpec::LogE`].
    PowOfLogE(F),
    /// `prod (|a|/a)(a - z)/(1 - conj(a) z)`, the factor being `z` for `a = 0`.
    Blaschke(Vec<Complex<F>>),
    /// `g(r z)`.
    Dilated(Box<SymbolSpec<F>>, F),
    /// `g^p` through the principal logarithm; `g` has no zeros in the disc.
    Power(Box<SymbolSpec<F>>, F),
}

impl<F: Real> SymbolSpec<F> {
    pub fn polynomial(coeffs: Vec<GaussianRational>) -> Self {
        let mut exact = coeffs;
        while exact.last().is_some_and(|c| c.is_zero()) {
            exact.pop();
        }
        let float = exact.iter().map(|c| c.to_complex::<F>()).collect();
        SymbolSpec::Polynomial(PolySymbol { exact, float })
    }

    /// Polynomial from integer coefficients, lowest degree first.
    pub fn poly_from_ints(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| GaussianRational::from_integer(c)).collect())
    }

    /// `g(z) = z`.
    pub fn identity() -> Self {
        Self::poly_from_ints(&[0, 1])
    }

    pub fn constant(c: i64) -> Self {
        Self::poly_from_ints(&[c])
    }

    pub fn log_e() -> Self {
        SymbolSpec::LogE
    }

    pub fn pow_log_e(beta: F) -> Self {
        SymbolSpec::PowOfLogE(beta)
    }

    pub fn blaschke(zeros: Vec<Complex<F>>) -> Result<Self, SymbolError> {
        if let Some(a) = zeros.iter().find(|a| a.norm() >= F::one()) {
            return Err(SymbolError::ZeroOutsideDisc([to_f64(a.re), to_f64(a.im)]));
        }
        Ok(SymbolSpec::Blaschke(zeros))
    }

    /// Zeros `1 - 2^-k`, `k = 1..=12`.
    pub fn default_blaschke() -> Self {
        SymbolSpec::Blaschke(
            (1..=12)
                .map(|k| Complex::new(F::one() - lit::<F>(0.5).powi(k), F::zero()))
                .collect(),
        )
    }

    /// `z -> g(r z)`; nested dilations multiply radii.
    pub fn dilate(&self, r: F) -> Result<Self, SymbolError> {
        if !(r > F::zero() && r < F::one()) {
            return Err(SymbolError::BadRadius(to_f64(r)));
        }
        Ok(match self {
            SymbolSpec::Dilated(inner, s) => SymbolSpec::Dilated(inner.clone(), *s * r),
            other => SymbolSpec::Dilated(Box::new(other.clone()), r),
        })
    }

    /// `g^p` with the principal branch; rejected when `g` may vanish in the disc.
    pub fn power(&self, p: F) -> Result<Self, SymbolError> {
        if !self.is_zero_free() {
            return Err(SymbolError::HasZeros(self.to_string()));
        }
        Ok(SymbolSpec::Power(Box::new(self.clone()), p))
    }

    /// Whether `g` has no zeros in the open disc (for dilations, in the disc
    /// the dilation actually sees).
    pub fn is_zero_free(&self) -> bool {
        self.zero_free_within(F::one())
    }

    fn zero_free_within(&self, radius: F) -> bool {
        match self {
            SymbolSpec::Polynomial(p) => !p.float.is_empty() && p.zeros_inside(radius) == 0,
            SymbolSpec::LogE | SymbolSpec::PowOfLogE(_) | SymbolSpec::Power(..) => true,
            SymbolSpec::Blaschke(zeros) => zeros.iter().all(|a| a.norm() >= radius),
            SymbolSpec::Dilated(inner, r) => inner.zero_free_within(radius * *r),
        }
    }

    /// Zeros of `g` in the plane as far as they are known in closed form
    /// (polynomials, Blaschke products and their dilations); empty otherwise.
    pub fn known_zeros(&self) -> Vec<Complex<F>> {
        match self {
            SymbolSpec::Polynomial(p) => p.roots(),
            SymbolSpec::Blaschke(zeros) => zeros.clone(),
            SymbolSpec::Dilated(inner, r) => inner.known_zeros().into_iter().map(|z| z / *r).collect(),
            SymbolSpec::LogE | SymbolSpec::PowOfLogE(_) | SymbolSpec::Power(..) => Vec::new(),
        }
    }

    /// Radius of the largest open disc around 0 on which `g` is holomorphic
    /// (a lower estimate for powers).
    pub fn holomorphy_radius(&self) -> F {
        match self {
            SymbolSpec::Polynomial(_) => F::infinity(),
            SymbolSpec::LogE | SymbolSpec::PowOfLogE(_) => F::one(),
            SymbolSpec::Blaschke(zeros) => {
                let m = zeros.iter().map(|a| a.norm()).fold(F::zero(), F::max);
                if m == F::zero() {
                    F::infinity()
                } else {
                    F::one() / m
                }
            }
            SymbolSpec::Dilated(inner, r) => inner.holomorphy_radius() / *r,
            SymbolSpec::Power(inner, _) => inner.holomorphy_radius().min(F::one()),
        }
    }

    /// `(g(z), g'(z))` without domain checks.
    pub fn eval(&self, z: Complex<F>) -> (Complex<F>, Complex<F>) {
        match self {
            SymbolSpec::Polynomial(p) => p.eval(z),
            SymbolSpec::LogE => {
                let one = Complex::<F>::one();
                let w = one - z;
                (one - w.ln(), w.inv())
            }
            SymbolSpec::PowOfLogE(beta) => {
                let one = Complex::<F>::one();
                let w = one - z;
                let h = one - w.ln();
                let hb = h.powf(*beta);
                (hb, hb * *beta / (h * w))
            }
            SymbolSpec::Blaschke(zeros) => blaschke_eval(zeros, z),
            SymbolSpec::Dilated(inner, r) => {
                let (g, dg) = inner.eval(z * *r);
                (g, dg * *r)
            }
            SymbolSpec::Power(inner, p) => {
                let (g, dg) = inner.eval(z);
                let gp = g.powf(*p);
                (gp, gp * *p * dg / g)
            }
        }
    }

    /// `g(z)` only.
    pub fn value(&self, z: Complex<F>) -> Complex<F> {
        self.eval(z).0
    }

    /// `|grad |g|^q|(z) = q |g|^(q-1) |g'|`.
    pub fn grad_abs_pow(&self, z: Complex<F>, q: F) -> F {
        let (g, dg) = self.eval(z);
        grad_abs_pow_parts(g, dg, q)
    }

    /// First `n + 1` Taylor coefficients, or the exact coefficient list when
    /// the symbol is a polynomial in disguise.
    pub fn taylor(&self, n: usize) -> ComplexSeries<F> {
        if let Some(exact) = self.exact_taylor() {
            return PowerSeries::polynomial(exact.coeffs().iter().map(|c| c.to_complex()).collect());
        }
        PowerSeries::truncated(self.taylor_coeffs(n), n)
    }

    /// Exact coefficients when `g` is a polynomial, a dilated polynomial with
    /// rational-representable radius, or a Blaschke product with all zeros
    /// at the origin.
    pub fn exact_taylor(&self) -> Option<ExactSeries> {
        match self {
            SymbolSpec::Polynomial(p) => Some(PowerSeries::polynomial(p.exact.clone())),
            SymbolSpec::Blaschke(zeros) if zeros.iter().all(|a| a.is_zero()) => {
                Some(ExactSeries::monomial(zeros.len()))
            }
            SymbolSpec::Dilated(inner, r) => {
                let inner = inner.exact_taylor()?;
                let r = GaussianRational::from_f64_pair(to_f64(*r), 0.0)?;
                Some(inner.dilate_by(&r))
            }
            _ => None,
        }
    }

    fn taylor_coeffs(&self, n: usize) -> Vec<Complex<F>> {
        match self {
            SymbolSpec::Polynomial(p) => {
                let mut c = p.float.clone();
                c.resize(n + 1, Complex::zero());
                c
            }
            SymbolSpec::LogE => log_e_coeffs(n),
            SymbolSpec::PowOfLogE(beta) => power_series_pow(&log_e_coeffs(n), *beta),
            SymbolSpec::Blaschke(zeros) => {
                let mut acc = vec![Complex::zero(); n + 1];
                acc[0] = Complex::one();
                for a in zeros {
                    let factor = blaschke_factor_coeffs(*a, n);
                    acc = <Complex<F> as Coefficient>::convolve(&acc, &factor, n + 1);
                    acc.resize(n + 1, Complex::zero());
                }
                acc
            }
            SymbolSpec::Dilated(inner, r) => {
                let mut w = F::one();
                inner
                    .taylor_coeffs(n)
                    .into_iter()
                    .map(|c| {
                        let out = c * w;
                        w = w * *r;
                        out
                    })
                    .collect()
            }
            SymbolSpec::Power(inner, p) => power_series_pow(&inner.taylor_coeffs(n), *p),
        }
    }

    /// Short human-readable identifier.
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Casts to another float type.
    pub fn cast<G: Real>(&self) -> SymbolSpec<G> {
        let c = |x: F| lit::<G>(to_f64(x));
        let cz = |z: &Complex<F>| Complex::new(c(z.re), c(z.im));
        match self {
            SymbolSpec::Polynomial(p) => SymbolSpec::polynomial(p.exact.clone()),
            SymbolSpec::LogE => SymbolSpec::LogE,
            SymbolSpec::PowOfLogE(b) => SymbolSpec::PowOfLogE(c(*b)),
            SymbolSpec::Blaschke(z) => SymbolSpec::Blaschke(z.iter().map(cz).collect()),
            SymbolSpec::Dilated(i, r) => SymbolSpec::Dilated(Box::new(i.cast()), c(*r)),
            SymbolSpec::Power(i, p) => SymbolSpec::Power(Box::new(i.cast()), c(*p)),
        }
    }
}

/// `|grad |g|^q|` from the value and derivative of `g`.
pub fn grad_abs_pow_parts<F: Real>(g: Complex<F>, dg: Complex<F>, q: F) -> F {
    let a = g.norm();
    let d = dg.norm();
    if a == F::zero() {
        return if q < F::one() {
            if d == F::zero() {
                F::zero()
            } else {
                F::infinity()
            }
        } else if q == F::one() {
            d
        } else {
            F::zero()
        };
    }
    q * a.powf(q - F::one()) * d
}

fn blaschke_eval<F: Real>(zeros: &[Complex<F>], z: Complex<F>) -> (Complex<F>, Complex<F>) {
    let n = zeros.len();
    let mut vals = Vec::with_capacity(n);
    let mut ders = Vec::with_capacity(n);
    for a in zeros {
        if a.is_zero() {
            vals.push(z);
            ders.push(Complex::one());
            continue;
        }
        let r = a.norm();
        let u = Complex::new(r, F::zero()) / *a;
        let den = Complex::<F>::one() - a.conj() * z;
        vals.push(u * (*a - z) / den);
        ders.push(u * (r * r - F::one()) / (den * den));
    }
    let mut prefix = vec![Complex::<F>::one(); n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] * vals[k];
    }
    let mut suffix = Complex::<F>::one();
    let mut deriv = Complex::zero();
    for k in (0..n).rev() {
        deriv = deriv + prefix[k] * ders[k] * suffix;
        suffix = suffix * vals[k];
    }
    (prefix[n], deriv)
}

fn blaschke_factor_coeffs<F: Real>(a: Complex<F>, n: usize) -> Vec<Complex<F>> {
    let mut out = vec![Complex::zero(); n + 1];
    if a.is_zero() {
        if n >= 1 {
            out[1] = Complex::one();
        }
        return out;
    }
    let u = Complex::new(a.norm(), F::zero()) / a;
    let ab = a.conj();
    // (a - z) * sum (conj(a) z)^k
    let mut geo = Complex::<F>::one();
    let mut prev = Complex::zero();
    for c in out.iter_mut() {
        *c = u * (a * geo - prev);
        prev = geo;
        geo = geo * ab;
    }
    out
}

fn log_e_coeffs<F: Real>(n: usize) -> Vec<Complex<F>> {
    (0..=n)
        .map(|k| {
            if k == 0 {
                Complex::one()
            } else {
                Complex::new(F::one() / from_usize::<F>(k), F::zero())
            }
        })
        .collect()
}

/// `h^beta` for a series with `h(0) != 0`:
/// `y_k = (1/(k h_0)) sum_{j=1}^k ((beta+1) j - k) h_j y_{k-j}`.
fn power_series_pow<F: Real>(h: &[Complex<F>], beta: F) -> Vec<Complex<F>> {
    let n = h.len();
    let mut y = vec![Complex::<F>::zero(); n];
    if n == 0 {
        return y;
    }
    y[0] = h[0].powf(beta);
    let b1 = beta + F::one();
    for k in 1..n {
        let kf = from_usize::<F>(k);
        let mut acc = Complex::<F>::zero();
        for j in 1..=k {
            let w = b1 * from_usize::<F>(j) - kf;
            acc = acc + h[j] * y[k - j] * w;
        }
        y[k] = acc / (h[0] * kf);
    }
    y
}

/// `(g(z), g'(z))` with a domain check.
pub fn sym_eval<F: Real>(g: &SymbolSpec<F>, z: Complex<F>) -> Result<(Complex<F>, Complex<F>), SymbolError> {
    let out_of_domain = || SymbolError::OutsideDomain {
        symbol: g.to_string(),
        z: [to_f64(z.re), to_f64(z.im)],
    };
    let rad = g.holomorphy_radius();
    let closed_ok = matches!(g, SymbolSpec::LogE | SymbolSpec::PowOfLogE(_));
    if z.norm() > rad || (z.norm() == rad && !closed_ok) {
        return Err(out_of_domain());
    }
    let (v, d) = g.eval(z);
    if !(v.re.is_finite() && v.im.is_finite() && d.re.is_finite() && d.im.is_finite()) {
        return Err(out_of_domain());
    }
    Ok((v, d))
}

pub fn sym_taylor<F: Real>(g: &SymbolSpec<F>, n: usize) -> ComplexSeries<F> {
    g.taylor(n)
}

pub fn dilate<F: Real>(g: &SymbolSpec<F>, r: F) -> Result<SymbolSpec<F>, SymbolError> {
    g.dilate(r)
}

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl<F: Real> fmt::Display for SymbolSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolSpec::Polynomial(p) => {
                if p.exact.len() == 2 && p.exact[0].is_zero() && p.exact[1] == GaussianRational::from_integer(1) {
                    return write!(f, "z");
                }
                write!(f, "poly(")?;
                for (k, c) in p.exact.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            SymbolSpec::LogE => write!(f, "loge"),
            SymbolSpec::PowOfLogE(b) => write!(f, "powlog({})", fmt_num(to_f64(*b))),
            SymbolSpec::Blaschke(z) => write!(f, "blaschke({} zeros)", z.len()),
            SymbolSpec::Dilated(i, r) => write!(f, "{i}@{}", fmt_num(to_f64(*r))),
            SymbolSpec::Power(i, p) => write!(f, "({i})^{}", fmt_num(to_f64(*p))),
        }
    }
}

impl std::str::FromStr for SymbolSpec<f64> {
    type Err = SymbolError;

    /// Accepts a JSON literal or a short form: `z`, `loge`, `powlog:0.5`,
    /// `powlog:7/12`, `blaschke`, `blaschke:0.5,0.9`, `poly:0,1,1/2`,
    /// `power:3:loge`, each optionally followed by `@r` for a dilation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        json::parse_symbol(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    #[test]
    fn polynomial_roots() {
        // (z - 1/2)(z + 2i)(z - 3) expanded, times 2
        let g = SymbolSpec::<f64>::poly_from_ints(&[0, 0, 0]);
        assert!(g.known_zeros().is_empty());
        let want = [C::new(0.5, 0.0), C::new(0.0, -2.0), C::new(3.0, 0.0)];
        let mut c = vec![C::new(1.0, 0.0)];
        for r in want {
            let mut next = vec![C::new(0.0, 0.0); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        let mut got = aberth(&c);
        got.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).norm() < 1e-12, "{got:?}");
        }
        let d = SymbolSpec::<f64>::poly_from_ints(&[-1, 2]).dilate(0.5).unwrap();
        assert!((d.known_zeros()[0] - C::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn log_e_at_zero() {
        let (g, dg) = SymbolSpec::<f64>::log_e().eval(C::new(0.0, 0.0));
        assert_eq!((g, dg), (C::new(1.0, 0.0), C::new(1.0, 0.0)));
    }

    #[test]
    fn pow_log_e_at_zero() {
        let (g, dg) = SymbolSpec::pow_log_e(7.0 / 12.0).eval(C::new(0.0, 0.0));
        assert_relative_eq!(g.re, 1.0);
        assert_relative_eq!(dg.re, 7.0 / 12.0);
    }

    #[test]
    fn dilated_chain_rule() {
        let g = SymbolSpec::log_e().dilate(0.5).unwrap();
        let (v, d) = g.eval(C::new(0.8, 0.0));
        let (v0, d0) = SymbolSpec::log_e().eval(C::new(0.4, 0.0));
        assert_relative_eq!((v - v0).norm(), 0.0);
        assert_relative_eq!((d - d0 * 0.5).norm(), 0.0);
    }

    #[test]
    fn nested_dilation_multiplies() {
        let g = SymbolSpec::<f64>::log_e();
        let a = g.dilate(0.5).unwrap().dilate(0.5).unwrap();
        let b = g.dilate(0.25).unwrap();
        for z in [C::new(0.3, 0.2), C::new(-0.9, 0.1)] {
            assert_relative_eq!((a.eval(z).0 - b.eval(z).0).norm(), 0.0, epsilon = 1e-15);
        }
        assert_eq!(a.eval(C::new(0.0, 0.0)).0, g.eval(C::new(0.0, 0.0)).0);
        assert!(g.dilate(1.0).is_err());
    }

    #[test]
    fn taylor_of_log_e() {
        let t = SymbolSpec::<f64>::log_e().taylor(3);
        let want = [1.0, 1.0, 0.5, 1.0 / 3.0];
        for (k, w) in want.iter().enumerate() {
            assert_relative_eq!(t.coeff(k).re, *w);
        }
        assert_relative_eq!(t.eval(C::new(0.0, 0.0)).re, 1.0);
    }

    #[test]
    fn taylor_of_blaschke_at_origin() {
        let b = SymbolSpec::<f64>::blaschke(vec![C::new(0.0, 0.0)]).unwrap();
        let t = b.taylor(2);
        assert!(t.is_exact());
        assert_eq!(t.coeffs(), &[C::new(0.0, 0.0), C::new(1.0, 0.0)]);
    }

    #[test]
    fn taylor_matches_pointwise() {
        let z = C::new(0.3, -0.4);
        let gs: Vec<SymbolSpec<f64>> = vec![
            SymbolSpec::pow_log_e(7.0 / 12.0),
            SymbolSpec::blaschke(vec![C::new(0.5, 0.1), C::new(-0.3, 0.0)]).unwrap(),
            SymbolSpec::log_e().dilate(0.9).unwrap(),
            SymbolSpec::log_e().power(1.5).unwrap(),
        ];
        for g in gs {
            let t = g.taylor(200);
            assert!((t.eval(z) - g.value(z)).norm() < 1e-12, "{g}");
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        let gs: Vec<SymbolSpec<f64>> = vec![
            SymbolSpec::pow_log_e(0.5),
            SymbolSpec::default_blaschke(),
            SymbolSpec::poly_from_ints(&[1, -2, 0, 3]),
            SymbolSpec::log_e().power(-0.7).unwrap(),
        ];
        let z = C::new(0.2, 0.35);
        for g in gs {
            let num = (g.value(z + h) - g.value(z - h)) / (2.0 * h);
            let (_, d) = g.eval(z);
            assert!((num - d).norm() < 1e-6 * d.norm().max(1.0), "{g}");
        }
    }

    #[test]
    fn power_needs_zero_free() {
        assert!(SymbolSpec::<f64>::identity().power(0.5).is_err());
        assert!(SymbolSpec::<f64>::poly_from_ints(&[3, 1]).power(0.5).is_ok());
        assert!(SymbolSpec::<f64>::default_blaschke().power(2.0).is_err());
    }

    #[test]
    fn blaschke_modulus() {
        let b = SymbolSpec::<f64>::default_blaschke();
        for k in 0..64 {
            let t = std::f64::consts::TAU * k as f64 / 64.0;
            let z = C::from_polar(0.7, t);
            assert!(b.value(z).norm() < 1.0);
        }
        assert!(b.value(C::new(0.5, 0.0)).norm() < 1e-15);
        assert_relative_eq!(b.value(C::from_polar(0.999, 2.0)).norm(), 1.0, epsilon = 0.05);
    }
}
