//! Norms, seminorms and measure functionals evaluated by quadrature.
//!
//! Every supremum over the disc is a maximum over finitely many nodes, so
//! the reported values are lower bounds with the maximising node attached.

mod carleson;
mod hardy;

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use carleson::{
    calderon_ratio, carleson_norm, nt_maximal, nt_maximal_lp, square_area_fn, tent_norm, weighted_lp_norm,
    CarlesonMode, MeasureField,
};
pub use hardy::{hardy_stein_residual, hardy_stein_sides, weight_w_alpha};

use crate::geometry::{moebius, moebius_defect, DiscGrid, GridSpec, QuadRule};
use crate::scalar::{complex_to_f64, from_usize, lit, pairwise_sum, to_f64, Real};
use crate::series::PowerSeries;
use crate::symbols::{grad_abs_pow_parts, SymbolSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("non-finite sample at z = {0:?}; the symbol is singular on the grid")]
    NonFinite([f64; 2]),
    #[error("q = {0} < 1: the Bloch-type functional may be infinite (pass allow_below_one to force)")]
    QBelowOne(f64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

/// Result of a functional evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub functional: String,
    pub symbol: String,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<[f64; 2]>,
    pub grid: GridSpec,
}

impl NormReport {
    pub fn new(functional: &str, symbol: String, grid: GridSpec) -> Self {
        Self {
            functional: functional.to_string(),
            symbol,
            params: BTreeMap::new(),
            value: 0.0,
            argmax: None,
            grid,
        }
    }

    pub fn param(mut self, key: &str, v: f64) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

/// Something that can be sampled on the disc.
pub trait Evaluable<F: Real>: Sync {
    fn value(&self, z: Complex<F>) -> Complex<F>;

    /// Whether the function is holomorphic past the closed disc, so that
    /// boundary integrals may be taken on `|z| = 1`.
    fn extends_past_boundary(&self) -> bool;

    /// Radius used for Hardy-space (`alpha = -1`) integrals on `grid`.
    fn boundary_radius(&self, grid: &DiscGrid<F>) -> F {
        if self.extends_past_boundary() {
            F::one()
        } else {
            grid.r_max
        }
    }
}

impl<F: Real> Evaluable<F> for SymbolSpec<F> {
    fn value(&self, z: Complex<F>) -> Complex<F> {
        self.eval(z).0
    }
    fn extends_past_boundary(&self) -> bool {
        self.holomorphy_radius() > F::one()
    }
}

impl<F: Real> Evaluable<F> for PowerSeries<Complex<F>> {
    fn value(&self, z: Complex<F>) -> Complex<F> {
        self.eval(z)
    }
    fn extends_past_boundary(&self) -> bool {
        self.is_exact()
    }
}

/// Wraps a closure; `extends` says whether it is regular on the closed disc.
pub struct FnEval<G> {
    pub f: G,
    pub extends: bool,
}

impl<F: Real, G: Fn(Complex<F>) -> Complex<F> + Sync> Evaluable<F> for FnEval<G> {
    fn value(&self, z: Complex<F>) -> Complex<F> {
        (self.f)(z)
    }
    fn extends_past_boundary(&self) -> bool {
        self.extends
    }
}

fn check<F: Real>(x: F, z: Complex<F>) -> Result<F, NormError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(NormError::NonFinite(complex_to_f64(z)))
    }
}

/// `sum w |f|^p` over a rule.
pub(crate) fn moment<F: Real>(
    rule: &QuadRule<F>,
    p: F,
    mut sample: impl FnMut(Complex<F>) -> F,
) -> Result<F, NormError> {
    let mut terms = Vec::with_capacity(rule.len());
    for (z, w) in rule.points.iter().zip(&rule.weights) {
        let v = check(sample(*z), *z)?;
        terms.push(*w * v.powf(p));
    }
    Ok(pairwise_sum(&terms))
}

/// `||f||_{A^p_alpha}`; for `alpha = -1` the Hardy norm on the circle given
/// by [`Evaluable::boundary_radius`].
pub fn apalpha_norm<F: Real, E: Evaluable<F> + ?Sized>(
    f: &E,
    p: F,
    alpha: F,
    grid: &DiscGrid<F>,
) -> Result<F, NormError> {
    if !(p > F::zero()) {
        return Err(NormError::Invalid(format!("p = {} must be positive", to_f64(p))));
    }
    let rule = grid.rule(alpha, f.boundary_radius(grid));
    Ok(moment(&rule, p, |z| f.value(z).norm())?.powf(F::one() / p))
}

/// `||.||_{L^p}` of sampled moduli against a rule.
pub fn lp_norm_of_samples<F: Real>(rule: &QuadRule<F>, moduli: &[F], p: F) -> Result<F, NormError> {
    let mut terms = Vec::with_capacity(moduli.len());
    for ((z, w), v) in rule.points.iter().zip(&rule.weights).zip(moduli) {
        terms.push(*w * check(*v, *z)?.powf(p));
    }
    Ok(pairwise_sum(&terms).powf(F::one() / p))
}

/// The 81 default centres: `r e^{i k pi / 8}`, `r in {.5, .8, .9, .95, .99}`,
/// plus the origin.
pub fn default_a_grid<F: Real>() -> Vec<Complex<F>> {
    let mut out = vec![Complex::new(F::zero(), F::zero())];
    for r in [0.5, 0.8, 0.9, 0.95, 0.99] {
        for k in 0..16 {
            out.push(Complex::from_polar(
                lit::<F>(r),
                F::TAU() * from_usize::<F>(k) / lit::<F>(16.0),
            ));
        }
    }
    out
}

/// `sup_z (1 - |z|^2) |grad |g|^q|` raised to `1/q`.
pub fn bloch_q_seminorm<F: Real>(
    g: &SymbolSpec<F>,
    q: F,
    grid: &DiscGrid<F>,
    allow_below_one: bool,
) -> Result<NormReport, NormError> {
    if q < F::one() && !allow_below_one {
        return Err(NormError::QBelowOne(to_f64(q)));
    }
    let pts = grid.sup_points();
    let vals = pts
        .par_iter()
        .map(|&z| {
            let (v, d) = g.eval(z);
            check((F::one() - z.norm_sqr()) * grad_abs_pow_parts(v, d, q), z)
        })
        .collect::<Result<Vec<F>, _>>()?;
    let (k, best) = argmax(&vals);
    let mut rep = NormReport::new("bloch", g.label(), grid.spec()).param("q", to_f64(q));
    rep.value = to_f64(best.powf(F::one() / q));
    rep.argmax = Some(complex_to_f64(pts[k]));
    Ok(rep)
}

pub(crate) fn argmax<F: Real>(vals: &[F]) -> (usize, F) {
    let mut k = 0;
    let mut best = F::neg_infinity();
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            k = i;
        }
    }
    (k, best)
}

/// `sup_a (||g o phi_a||^{2q}_{alpha,2q} - |g(a)|^{2q})^{1/(2q)}`, negative
/// radicands clamped to 0.
pub fn garsia_seminorm<F: Real>(
    g: &SymbolSpec<F>,
    alpha: F,
    q: F,
    a_grid: &[Complex<F>],
    inner: &DiscGrid<F>,
) -> Result<NormReport, NormError> {
    if !(q > F::zero()) {
        return Err(NormError::Invalid("q must be positive".into()));
    }
    let two_q = q + q;
    let rule = inner.rule(alpha, Evaluable::boundary_radius(g, inner));
    let vals = a_grid
        .par_iter()
        .map(|&a| {
            let m = moment(&rule, two_q, |z| g.value(moebius(a, z)).norm())?;
            let ga = check(g.value(a).norm(), a)?;
            Ok((m - ga.powf(two_q)).max(F::zero()))
        })
        .collect::<Result<Vec<F>, NormError>>()?;
    let (k, best) = argmax(&vals);
    let mut rep = NormReport::new("garsia", g.label(), inner.spec())
        .param("alpha", to_f64(alpha))
        .param("q", to_f64(q));
    rep.value = to_f64(best.powf(F::one() / two_q));
    rep.argmax = Some(complex_to_f64(a_grid[k]));
    Ok(rep)
}

/// `sup_a int (1 - |phi_a|^2)^{alpha+2} |grad |g|^q|^2 dA`, raised to `1/(2q)`.
pub fn bold_seminorm<F: Real>(
    g: &SymbolSpec<F>,
    alpha: F,
    q: F,
    a_grid: &[Complex<F>],
    grid: &DiscGrid<F>,
) -> Result<NormReport, NormError> {
    if !(q > F::zero()) {
        return Err(NormError::Invalid("q must be positive".into()));
    }
    let field = MeasureField::nu(g, q, grid)?;
    let masses = field.masses();
    let nodes = grid.nodes();
    let s = alpha + lit(2.0);
    let vals: Vec<F> = a_grid
        .par_iter()
        .map(|&a| {
            let terms: Vec<F> = nodes
                .iter()
                .zip(&masses)
                .map(|(z, m)| *m * moebius_defect(a, *z).powf(s))
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let (k, best) = argmax(&vals);
    let mut rep = NormReport::new("bold", g.label(), grid.spec())
        .param("alpha", to_f64(alpha))
        .param("q", to_f64(q));
    rep.value = to_f64(best.powf(F::one() / (q + q)));
    rep.argmax = Some(complex_to_f64(a_grid[k]));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> DiscGrid<f64> {
        DiscGrid::new(60, 64, 0.999, &[0.0]).unwrap()
    }

    #[test]
    fn constant_has_unit_norm() {
        let one = SymbolSpec::<f64>::constant(1);
        for alpha in [-1.0, 0.0, 1.5] {
            for p in [0.5, 1.0, 3.0] {
                let v = apalpha_norm(&one, p, alpha, &grid()).unwrap();
                let mass = 1.0 - (1.0 - 0.999f64.powi(2)).powf(alpha + 1.0);
                let expect = if alpha == -1.0 { 1.0 } else { mass.powf(1.0 / p) };
                assert_relative_eq!(v, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn monomial_norms() {
        let z = SymbolSpec::<f64>::identity();
        assert_relative_eq!(apalpha_norm(&z, 2.0, -1.0, &grid()).unwrap(), 1.0, epsilon = 1e-12);
        let z5 = SymbolSpec::<f64>::poly_from_ints(&[0, 0, 0, 0, 0, 1]);
        assert_relative_eq!(apalpha_norm(&z5, 2.0, -1.0, &grid()).unwrap(), 1.0, epsilon = 1e-12);
        let v = apalpha_norm(&z, 2.0, 0.0, &grid()).unwrap();
        assert_relative_eq!(v, 0.5f64.sqrt(), epsilon = 2e-3);
    }

    #[test]
    fn bloch_of_identity() {
        let r = bloch_q_seminorm(&SymbolSpec::identity(), 1.0, &grid(), false).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
        assert_eq!(r.argmax, Some([0.0, 0.0]));
        assert!(bloch_q_seminorm(&SymbolSpec::identity(), 0.5, &grid(), false).is_err());
    }

    #[test]
    fn seminorms_vanish_on_constants() {
        let c = SymbolSpec::<f64>::constant(3);
        let a = default_a_grid();
        assert_eq!(garsia_seminorm(&c, -1.0, 1.0, &a, &grid()).unwrap().value, 0.0);
        assert_eq!(garsia_seminorm(&c, 0.0, 1.0, &a, &grid()).unwrap().value, 0.0);
        assert_eq!(bold_seminorm(&c, 0.0, 1.0, &a, &grid()).unwrap().value, 0.0);
        assert_eq!(bloch_q_seminorm(&c, 2.0, &grid(), false).unwrap().value, 0.0);
    }

    #[test]
    fn garsia_of_identity_on_the_circle() {
        let r = garsia_seminorm(&SymbolSpec::identity(), -1.0, 1.0, &default_a_grid(), &grid()).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn homogeneity() {
        let g = SymbolSpec::<f64>::poly_from_ints(&[1, 2, -1]);
        let g3 = SymbolSpec::<f64>::poly_from_ints(&[3, 6, -3]);
        let a = default_a_grid();
        for q in [0.5, 1.0, 2.0] {
            let x = garsia_seminorm(&g, 0.0, q, &a, &grid()).unwrap().value;
            let y = garsia_seminorm(&g3, 0.0, q, &a, &grid()).unwrap().value;
            assert_relative_eq!(y, 3.0 * x, max_relative = 1e-10);
            let x = bold_seminorm(&g, -1.0, q, &a, &grid()).unwrap().value;
            let y = bold_seminorm(&g3, -1.0, q, &a, &grid()).unwrap().value;
            assert_relative_eq!(y, 3.0 * x, max_relative = 1e-10);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = bloch_q_seminorm(&SymbolSpec::identity(), 1.0, &grid(), false).unwrap();
        let v = r.to_json();
        assert_eq!(v["functional"], "bloch");
        assert_eq!(v["symbol"], "z");
        assert_eq!(v["grid"]["n_r"], 60);
        assert!(v["argmax"].is_array());
    }

    #[test]
    fn a_grid_has_81_points() {
        assert_eq!(default_a_grid::<f64>().len(), 81);
    }
}
