//! Lower bounds for operator norms of word operators on weighted Bergman
//! and Hardy spaces, and dilation scans comparing them with seminorms.

mod scan;

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scan::{equivalence_scan, plateaus, ScanRow, ScanTable};

use crate::geometry::DiscGrid;
use crate::norms::{NormError, NormReport};
use crate::scalar::{from_usize, lit, pairwise_sum, to_f64, Real};
use crate::series::{apply_expr, ComplexSeries, PowerSeries, SeriesError};
use crate::symbols::{SymbolError, SymbolSpec};
use crate::wordalg::{Letter, OperatorExpr, Term, WordError};

/// Truncation used when the symbol is singular on the unit circle.
pub const DEFAULT_TRUNCATION: usize = 256;
/// Largest relative tail mass accepted for a truncated result.
pub const TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum OpNormError {
    #[error(
        "series truncated at N = {n} leaves tail mass {tail:.3e} on the grid; increase N_trunc or dilate the symbol"
    )]
    Truncation { n: usize, tail: f64 },
    #[error("the test family is empty")]
    EmptyFamily,
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Test functions probing an operator norm from below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    /// `z^k`, `k = 0..=max_k`.
    Monomials(usize),
    /// `z^k`, `k = 1..=max_k`.
    RestrictedMonomials(usize),
    /// `(1 - |a|^2)^{(alpha+2)/p} (1 - conj(a) z)^{-2(alpha+2)/p}` for each centre.
    BergmanKernels(Vec<[f64; 2]>),
    Union(Vec<TestFamily>),
}

/// Centres `r e^{i k pi / 4}` for `r in {.3, .6, .8, .9, .95}`, plus `0`.
pub fn default_kernel_centres() -> Vec<[f64; 2]> {
    let mut out = vec![[0.0, 0.0]];
    for r in [0.3, 0.6, 0.8, 0.9, 0.95] {
        for k in 0..8 {
            let t = std::f64::consts::FRAC_PI_4 * k as f64;
            out.push([r * t.cos(), r * t.sin()]);
        }
    }
    out
}

impl TestFamily {
    /// Monomials up to degree 12 together with the default kernels.
    pub fn standard() -> Self {
        TestFamily::Union(vec![
            TestFamily::Monomials(12),
            TestFamily::BergmanKernels(default_kernel_centres()),
        ])
    }

    /// Members of `standard` vanishing at the origin.
    pub fn standard_restricted() -> Self {
        TestFamily::Union(vec![
            TestFamily::RestrictedMonomials(12),
            TestFamily::BergmanKernels(default_kernel_centres()),
        ])
    }

    /// Largest `|a|` among kernel centres.
    fn max_centre(&self) -> f64 {
        match self {
            TestFamily::BergmanKernels(c) => c.iter().map(|a| a[0].hypot(a[1])).fold(0.0, f64::max),
            TestFamily::Union(v) => v.iter().map(|f| f.max_centre()).fold(0.0, f64::max),
            _ => 0.0,
        }
    }

    /// Unnormalised members as series; kernels are truncated at `n`.
    pub fn members<F: Real>(&self, p: F, alpha: F, n: usize) -> Vec<(String, ComplexSeries<F>)> {
        match self {
            TestFamily::Monomials(k) => (0..=*k).map(|j| (format!("z^{j}"), PowerSeries::monomial(j))).collect(),
            TestFamily::RestrictedMonomials(k) => {
                (1..=*k).map(|j| (format!("z^{j}"), PowerSeries::monomial(j))).collect()
            }
            TestFamily::BergmanKernels(centres) => centres
                .iter()
                .map(|a| {
                    let a = Complex::new(lit::<F>(a[0]), lit::<F>(a[1]));
                    (
                        format!("kernel({:.4},{:.4})", to_f64(a.re), to_f64(a.im)),
                        kernel_series(a, p, alpha, n),
                    )
                })
                .collect(),
            TestFamily::Union(parts) => parts.iter().flat_map(|f| f.members(p, alpha, n)).collect(),
        }
    }
}

fn kernel_series<F: Real>(a: Complex<F>, p: F, alpha: F, n: usize) -> ComplexSeries<F> {
    let s = alpha + lit(2.0);
    let scale = (F::one() - a.norm_sqr()).powf(s / p);
    if a.is_zero() {
        return PowerSeries::constant(Complex::new(scale, F::zero()));
    }
    let c = (s + s) / p;
    let ac = a.conj();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut b = Complex::new(scale, F::zero());
    for k in 0..=n {
        coeffs.push(b);
        let kf = from_usize::<F>(k);
        b = b * ac * ((c + kf) / (kf + F::one()));
    }
    PowerSeries::truncated(coeffs, n)
}

/// `(radius, weight per node)` for every ring of the quadrature used for
/// `||.||_{alpha,p}`; `alpha = -1` is a single circle.
fn norm_rings<F: Real>(grid: &DiscGrid<F>, alpha: F, boundary: F) -> Vec<(F, F)> {
    if alpha <= -F::one() {
        return vec![(boundary, F::one() / from_usize::<F>(grid.n_theta))];
    }
    grid.radii()
        .iter()
        .copied()
        .zip(grid.alpha_ring_weights(alpha))
        .collect()
}

fn boundary_for<F: Real>(f: &ComplexSeries<F>, grid: &DiscGrid<F>) -> F {
    if f.is_exact() {
        F::one()
    } else {
        grid.r_max
    }
}

fn check_tail<F: Real>(f: &ComplexSeries<F>, radius: F) -> Result<(), OpNormError> {
    if let crate::series::Truncation::At(n) = f.truncation() {
        let tail = f.tail_mass(to_f64(radius));
        if !(tail <= TAIL_LIMIT) {
            return Err(OpNormError::Truncation { n, tail });
        }
    }
    Ok(())
}

/// `sum w |f|^p` of a series over the rings of the norm quadrature.
fn series_moment<F: Real>(
    f: &ComplexSeries<F>,
    p: F,
    alpha: F,
    grid: &DiscGrid<F>,
    planner: &mut FftPlanner<F>,
) -> Result<F, OpNormError> {
    let rings = norm_rings(grid, alpha, boundary_for(f, grid));
    let outer = rings.iter().map(|r| r.0).fold(F::zero(), F::max);
    check_tail(f, outer)?;
    let radii: Vec<F> = rings.iter().map(|r| r.0).collect();
    let values = f.eval_rings(&radii, outer, grid.n_theta, planner);
    let mut parts = Vec::with_capacity(rings.len());
    for ((r, w), vals) in rings.into_iter().zip(values) {
        let terms: Vec<F> = vals.iter().map(|v| v.norm().powf(p)).collect();
        let s = pairwise_sum(&terms);
        if !s.is_finite() {
            return Err(NormError::NonFinite([to_f64(r), 0.0]).into());
        }
        parts.push(s * w);
    }
    Ok(pairwise_sum(&parts))
}

/// `||f||_{alpha,p}` of a series by the grid quadrature.
pub fn series_norm<F: Real>(f: &ComplexSeries<F>, p: F, alpha: F, grid: &DiscGrid<F>) -> Result<F, OpNormError> {
    let mut planner = FftPlanner::new();
    Ok(series_moment(f, p, alpha, grid, &mut planner)?.powf(F::one() / p))
}

/// Truncation for a symbol and family: [`DEFAULT_TRUNCATION`] when the symbol
/// is singular on the unit circle, otherwise large enough that the
/// coefficients of the symbol and of the kernels, which decay like
/// `k^{c-1} q^k`, reach `1e-13` on the grid.
pub fn auto_truncation<F: Real>(g: &SymbolSpec<F>, family: &TestFamily, p: F, alpha: F, grid: &DiscGrid<F>) -> usize {
    let rho = to_f64(g.holomorphy_radius());
    if rho <= 1.0 {
        return DEFAULT_TRUNCATION;
    }
    let r = to_f64(grid.r_max);
    let q = (r / rho).max(r * family.max_centre());
    if q <= 0.0 {
        return 64;
    }
    let c = (2.0 * (to_f64(alpha) + 2.0) / to_f64(p) - 1.0).max(0.0);
    let target = (1e-13f64).ln();
    let mut n = 16usize;
    while (n as f64) * q.ln() + c * (n as f64).ln() > target && n < 1 << 20 {
        n += n / 8 + 1;
    }
    (n + 16).clamp(64, 1 << 20)
}

/// When `e` is `sum c_l M^l` (no `Pi0`), the polynomial `c_l` it applies to `g`.
fn multiplier_polynomial(e: &OperatorExpr) -> Option<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (term, c) in e.terms() {
        if term.pi0 || term.word.letters().iter().any(|l| *l != Letter::M) {
            return None;
        }
        out.push((term.word.len(), c.to_f64()?));
    }
    Some(out)
}

fn check_params<F: Real>(p: F, alpha: F) -> Result<(), OpNormError> {
    if !(p > F::zero()) || !(alpha >= -F::one()) {
        return Err(OpNormError::Invalid(format!(
            "need p > 0 and alpha >= -1, got p = {}, alpha = {}",
            to_f64(p),
            to_f64(alpha)
        )));
    }
    Ok(())
}

/// Normalised members, dropping those that vanish (after `Pi0` when
/// `restricted`).
fn prepared_members<F: Real>(
    family: &TestFamily,
    p: F,
    alpha: F,
    n: usize,
    restricted: bool,
    grid: &DiscGrid<F>,
) -> Result<Vec<(String, ComplexSeries<F>)>, OpNormError> {
    let raw = family.members(p, alpha, n);
    let out = raw
        .into_par_iter()
        .map(|(label, f)| {
            let f = if restricted { f.pi0() } else { f };
            if f.is_zero() {
                return Ok(None);
            }
            let norm = series_norm(&f, p, alpha, grid)?;
            if !(norm > F::zero()) {
                return Ok(None);
            }
            Ok(Some((label, f.real_scale(F::one() / norm))))
        })
        .collect::<Result<Vec<_>, OpNormError>>()?;
    let out: Vec<_> = out.into_iter().flatten().collect();
    if out.is_empty() {
        return Err(OpNormError::EmptyFamily);
    }
    Ok(out)
}

fn best_member<F: Real>(vals: &[F]) -> (usize, F) {
    let mut k = 0;
    let mut best = F::neg_infinity();
    for (i, v) in vals.iter().enumerate() {
        if *v > best {
            best = *v;
            k = i;
        }
    }
    (k, best)
}

/// `max ||e f||_{alpha,p}` over the normalised members of `family`; with
/// `restricted` the members are replaced by `f - f(0)`.
///
/// Pure multiplication expressions `sum c_l M^l` return `sup |sum c_l g^l|`
/// over the grid instead.
#[allow(clippy::too_many_arguments)]
pub fn op_lower_bound<F: Real>(
    e: &OperatorExpr,
    g: &SymbolSpec<F>,
    p: F,
    alpha: F,
    family: &TestFamily,
    n_trunc: Option<usize>,
    restricted: bool,
    grid: &DiscGrid<F>,
) -> Result<NormReport, OpNormError> {
    let mut out = op_lower_bounds(std::slice::from_ref(e), g, p, alpha, family, n_trunc, restricted, grid)?;
    Ok(out.remove(0))
}

/// [`op_lower_bound`] for several expressions sharing one set of
/// normalised test functions.
#[allow(clippy::too_many_arguments)]
pub fn op_lower_bounds<F: Real>(
    exprs: &[OperatorExpr],
    g: &SymbolSpec<F>,
    p: F,
    alpha: F,
    family: &TestFamily,
    n_trunc: Option<usize>,
    restricted: bool,
    grid: &DiscGrid<F>,
) -> Result<Vec<NormReport>, OpNormError> {
    check_params(p, alpha)?;
    let name = if restricted {
        "opnorm_restricted_lb"
    } else {
        "opnorm_lb"
    };
    let base = NormReport::new(name, g.label(), grid.spec())
        .param("p", to_f64(p))
        .param("alpha", to_f64(alpha));
    let mut out: Vec<Option<NormReport>> = vec![None; exprs.len()];
    let mut rest = Vec::new();
    for (slot, e) in out.iter_mut().zip(exprs) {
        match multiplier_polynomial(e) {
            Some(poly) => *slot = Some(multiplier_bound(&poly, g, base.clone(), grid)?),
            None => rest.push(e),
        }
    }
    if !rest.is_empty() {
        let n = n_trunc.unwrap_or_else(|| auto_truncation(g, family, p, alpha, grid));
        let gs = g.taylor(n);
        check_tail(&gs, grid.r_max)?;
        let members = prepared_members(family, p, alpha, n, restricted, grid)?;
        let mut reports = Vec::with_capacity(rest.len());
        for e in rest {
            let vals = members
                .par_iter()
                .map(|(_, f)| {
                    let lf = apply_expr(e, &gs, f)?;
                    let mut planner = FftPlanner::new();
                    Ok(series_moment(&lf, p, alpha, grid, &mut planner)?.powf(F::one() / p))
                })
                .collect::<Result<Vec<F>, OpNormError>>()?;
            let (k, best) = best_member(&vals);
            let mut rep = base.clone().param("n_trunc", n as f64).param("member", k as f64);
            rep.value = to_f64(best);
            log::debug!("{name}: best member {}", members[k].0);
            reports.push(rep);
        }
        let mut it = reports.into_iter();
        for slot in out.iter_mut().filter(|s| s.is_none()) {
            *slot = it.next();
        }
    }
    Ok(out.into_iter().map(|r| r.expect("every slot filled")).collect())
}

fn multiplier_bound<F: Real>(
    poly: &[(usize, f64)],
    g: &SymbolSpec<F>,
    base: NormReport,
    grid: &DiscGrid<F>,
) -> Result<NormReport, OpNormError> {
    let mut pts = grid.sup_points();
    if g.holomorphy_radius() > F::one() {
        pts.extend(grid.unit_roots().iter().copied());
    }
    let vals: Vec<F> = pts
        .par_iter()
        .map(|&z| {
            let gz = g.value(z);
            let mut acc = Complex::new(F::zero(), F::zero());
            for (l, c) in poly {
                acc = acc + gz.powi(*l as i32) * lit::<F>(*c);
            }
            acc.norm()
        })
        .collect();
    let (k, best) = best_member(&vals);
    if !best.is_finite() {
        return Err(NormError::NonFinite(crate::scalar::complex_to_f64(pts[k])).into());
    }
    let mut rep = base.param("closed_form", 1.0);
    rep.value = to_f64(best);
    rep.argmax = Some(crate::scalar::complex_to_f64(pts[k]));
    Ok(rep)
}

/// `max || |g|^{tau l} T^l f ||_{L^p_alpha}` over the normalised members;
/// the field is evaluated node by node.
#[allow(clippy::too_many_arguments)]
pub fn q_op_lower_bound<F: Real>(
    tau: F,
    ell: usize,
    g: &SymbolSpec<F>,
    p: F,
    alpha: F,
    family: &TestFamily,
    n_trunc: Option<usize>,
    restricted: bool,
    grid: &DiscGrid<F>,
) -> Result<NormReport, OpNormError> {
    check_params(p, alpha)?;
    if !(tau > F::zero()) || ell == 0 {
        return Err(OpNormError::Invalid("need tau > 0 and l >= 1".into()));
    }
    let n = n_trunc.unwrap_or_else(|| auto_truncation(g, family, p, alpha, grid));
    let gs = g.taylor(n);
    check_tail(&gs, grid.r_max)?;
    let members = prepared_members(family, p, alpha, n, restricted, grid)?;
    let word = OperatorExpr::from_term(
        Term::new(crate::wordalg::Word::power(Letter::T, ell), false),
        num_rational::BigRational::from_integer(1.into()),
    );
    let power = tau * from_usize::<F>(ell);
    let vals = members
        .par_iter()
        .map(|(_, f)| {
            let tf = apply_expr(&word, &gs, f)?;
            let boundary = if tf.is_exact() && g.holomorphy_radius() > F::one() {
                F::one()
            } else {
                grid.r_max
            };
            let rings = norm_rings(grid, alpha, boundary);
            let outer = rings.iter().map(|r| r.0).fold(F::zero(), F::max);
            check_tail(&tf, outer)?;
            let mut planner = FftPlanner::new();
            let radii: Vec<F> = rings.iter().map(|r| r.0).collect();
            let values = tf.eval_rings(&radii, outer, grid.n_theta, &mut planner);
            let mut parts = Vec::with_capacity(rings.len());
            for ((r, w), vals) in rings.into_iter().zip(values) {
                let terms = vals
                    .iter()
                    .zip(grid.unit_roots())
                    .map(|(v, u)| {
                        let z = *u * r;
                        let x = g.value(z).norm().powf(power) * v.norm();
                        if x.is_finite() {
                            Ok(x.powf(p))
                        } else {
                            Err(NormError::NonFinite(crate::scalar::complex_to_f64(z)))
                        }
                    })
                    .collect::<Result<Vec<F>, NormError>>()?;
                parts.push(pairwise_sum(&terms) * w);
            }
            Ok(pairwise_sum(&parts).powf(F::one() / p))
        })
        .collect::<Result<Vec<F>, OpNormError>>()?;
    let (k, best) = best_member(&vals);
    let mut rep = NormReport::new("q_opnorm_lb", g.label(), grid.spec())
        .param("tau", to_f64(tau))
        .param("l", ell as f64)
        .param("p", to_f64(p))
        .param("alpha", to_f64(alpha))
        .param("n_trunc", n as f64)
        .param("member", k as f64);
    rep.value = to_f64(best);
    Ok(rep)
}
