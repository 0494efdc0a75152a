use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{argmax, check, Evaluable, NormError, NormReport};
use crate::geometry::{circle_rule, DiscGrid, Region, RingPrefix};
use crate::scalar::{complex_to_f64, from_usize, lit, pairwise_sum, to_f64, Real};
use crate::symbols::{grad_abs_pow_parts, SymbolSpec};

/// A measure `density * dA` sampled on the nodes of a [`DiscGrid`].
#[derive(Clone, Debug)]
pub struct MeasureField<F> {
    pub label: String,
    grid: DiscGrid<F>,
    density: Vec<F>,
}

impl<F: Real> MeasureField<F> {
    pub fn from_density(label: String, grid: &DiscGrid<F>, density: Vec<F>) -> Result<Self, NormError> {
        if density.len() != grid.len() {
            return Err(NormError::Invalid("density does not match the grid".into()));
        }
        if density.iter().any(|d| !(*d >= F::zero())) {
            return Err(NormError::Invalid("density must be finite and nonnegative".into()));
        }
        Ok(Self {
            label,
            grid: grid.clone(),
            density,
        })
    }

    /// `dA` itself.
    pub fn area(grid: &DiscGrid<F>) -> Self {
        Self {
            label: "area".into(),
            grid: grid.clone(),
            density: vec![F::one(); grid.len()],
        }
    }

    /// `|grad |g|^q|^2 dA`.
    pub fn nu(g: &SymbolSpec<F>, q: F, grid: &DiscGrid<F>) -> Result<Self, NormError> {
        let density = grid
            .nodes()
            .par_iter()
            .map(|&z| {
                let (v, d) = g.eval(z);
                let s = grad_abs_pow_parts(v, d, q);
                check(s * s, z)
            })
            .collect::<Result<Vec<F>, _>>()?;
        Ok(Self {
            label: format!("nu[{g}, q={}]", to_f64(q)),
            grid: grid.clone(),
            density,
        })
    }

    /// `(1 - |z|^2)^{alpha+2} |grad |g|^q|^2 dA`.
    pub fn mu(g: &SymbolSpec<F>, q: F, alpha: F, grid: &DiscGrid<F>) -> Result<Self, NormError> {
        let mut m = Self::nu(g, q, grid)?;
        let s = alpha + lit(2.0);
        for i in 0..grid.n_r {
            let r = grid.radii()[i];
            let w = (F::one() - r * r).powf(s);
            for d in &mut m.density[i * grid.n_theta..(i + 1) * grid.n_theta] {
                *d = *d * w;
            }
        }
        m.label = format!("mu[{g}, q={}, alpha={}]", to_f64(q), to_f64(alpha));
        Ok(m)
    }

    pub fn grid(&self) -> &DiscGrid<F> {
        &self.grid
    }

    pub fn density(&self) -> &[F] {
        &self.density
    }

    /// Node masses, ring-major.
    pub fn masses(&self) -> Vec<F> {
        let n = self.grid.n_theta;
        self.density
            .iter()
            .enumerate()
            .map(|(k, d)| *d * self.grid.area_weight(k / n))
            .collect()
    }

    pub fn total(&self) -> F {
        pairwise_sum(&self.masses())
    }

    fn prefix_of(&self, values: &[F]) -> RingPrefix<F> {
        RingPrefix::new(self.grid.n_r, self.grid.n_theta, values)
    }

    fn region_sum(&self, prefix: &RingPrefix<F>, region: &Region<F>) -> Option<F> {
        let mut parts = Vec::new();
        for i in 0..self.grid.n_r {
            if let Some((lo, hi)) = self.grid.region_arc(region, i) {
                parts.push(prefix.arc_sum(i, lo, hi));
            }
        }
        (!parts.is_empty()).then(|| pairwise_sum(&parts))
    }

    /// `mu(S(a))`, or `None` when no node lies in the box.
    pub fn box_mass(&self, a: Complex<F>) -> Option<F> {
        let prefix = self.prefix_of(&self.masses());
        self.region_sum(&prefix, &Region::CarlesonBox(a))
    }

    /// `int B_alpha(z, lambda) dmu(z)` with
    /// `B_alpha = (1 - |lambda|^2)^{alpha+2} / |1 - conj(lambda) z|^{2 alpha + 4}`.
    pub fn berezin(&self, lambda: Complex<F>, alpha: F) -> F {
        let s = alpha + lit(2.0);
        let scale = (F::one() - lambda.norm_sqr()).powf(s);
        let one = Complex::new(F::one(), F::zero());
        let nodes = self.grid.nodes();
        let terms: Vec<F> = nodes
            .iter()
            .zip(self.masses())
            .map(|(z, m)| m * scale / (one - lambda.conj() * *z).norm_sqr().powf(s))
            .collect();
        pairwise_sum(&terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarlesonMode {
    Box,
    Berezin,
}

/// `sup_a mu(S(a)) / (1 - |a|^2)^{alpha+2}` or the Berezin supremum.
pub fn carleson_norm<F: Real>(
    mu: &MeasureField<F>,
    alpha: F,
    mode: CarlesonMode,
    a_grid: &[Complex<F>],
) -> Result<NormReport, NormError> {
    let s = alpha + lit(2.0);
    let vals: Vec<Option<F>> = match mode {
        CarlesonMode::Box => {
            let prefix = mu.prefix_of(&mu.masses());
            a_grid
                .par_iter()
                .map(|&a| {
                    let m = mu.region_sum(&prefix, &Region::CarlesonBox(a));
                    if m.is_none() {
                        log::warn!("Carleson box at {a} contains no grid node; skipped");
                    }
                    m.map(|m| m / (F::one() - a.norm_sqr()).powf(s))
                })
                .collect()
        }
        CarlesonMode::Berezin => a_grid.par_iter().map(|&l| Some(mu.berezin(l, alpha))).collect(),
    };
    let flat: Vec<F> = vals.iter().map(|v| v.unwrap_or(F::neg_infinity())).collect();
    let (k, best) = argmax(&flat);
    if best == F::neg_infinity() {
        return Err(NormError::Invalid("no Carleson box met the grid".into()));
    }
    let name = match mode {
        CarlesonMode::Box => "carleson_box",
        CarlesonMode::Berezin => "carleson_berezin",
    };
    let mut rep = NormReport::new(name, mu.label.clone(), mu.grid.spec()).param("alpha", to_f64(alpha));
    rep.value = to_f64(best);
    rep.argmax = Some(complex_to_f64(a_grid[k]));
    Ok(rep)
}

/// For each ring `i`, the Stolz arc of the vertex `(radius, angle 0)`.
/// Rotating the vertex to grid angle `j` shifts every arc by `j`.
fn stolz_arcs<F: Real>(grid: &DiscGrid<F>, radius: F) -> Vec<Option<(i64, i64)>> {
    let region = Region::Stolz(Complex::new(radius, F::zero()));
    (0..grid.n_r).map(|i| grid.region_arc(&region, i)).collect()
}

/// Vertices of the outer integral with weights: the circle for
/// `alpha = -1`, the disc nodes with `dA_alpha` weights otherwise. Returned
/// as (ring radius, weight) groups; each group repeats over all angles.
fn vertex_rings<F: Real>(grid: &DiscGrid<F>, alpha: F) -> Vec<(F, F)> {
    if alpha <= -F::one() {
        return vec![(F::one(), F::one() / from_usize::<F>(grid.n_theta))];
    }
    grid.radii()
        .iter()
        .copied()
        .zip(grid.alpha_ring_weights(alpha))
        .collect()
}

/// Sums of `values * mass` over `Gamma(v)` for every vertex on the ring of
/// radius `radius`, one entry per grid angle.
fn stolz_sums<F: Real>(mf: &MeasureField<F>, prefix: &RingPrefix<F>, radius: F) -> Vec<F> {
    let arcs = stolz_arcs(&mf.grid, radius);
    (0..mf.grid.n_theta as i64)
        .map(|j| {
            let parts: Vec<F> = arcs
                .iter()
                .enumerate()
                .filter_map(|(i, a)| a.map(|(lo, hi)| prefix.arc_sum(i, lo + j, hi + j)))
                .collect();
            pairwise_sum(&parts)
        })
        .collect()
}

/// `( int ( int_{Gamma(v)} |psi|^q dnu )^{p/q} dA_alpha(v) )^{1/p}`; `psi`
/// is a ring-major field on the grid of `nu`.
pub fn tent_norm<F: Real>(psi: &[F], p: F, q: F, alpha: F, nu: &MeasureField<F>) -> Result<F, NormError> {
    if psi.len() != nu.grid.len() {
        return Err(NormError::Invalid("field does not match the grid".into()));
    }
    let weighted: Vec<F> = psi.iter().zip(nu.masses()).map(|(v, m)| v.abs().powf(q) * m).collect();
    let prefix = nu.prefix_of(&weighted);
    let exponent = p / q;
    let groups = vertex_rings(&nu.grid, alpha);
    let parts: Vec<F> = groups
        .par_iter()
        .map(|&(radius, w)| {
            let sums = stolz_sums(nu, &prefix, radius);
            let t: Vec<F> = sums.iter().map(|s| w * s.powf(exponent)).collect();
            pairwise_sum(&t)
        })
        .collect();
    Ok(pairwise_sum(&parts).powf(F::one() / p))
}

/// `( int |psi|^p (1 - |z|^2)^{alpha+2} dnu )^{1/p}`.
pub fn weighted_lp_norm<F: Real>(psi: &[F], p: F, alpha: F, nu: &MeasureField<F>) -> F {
    let n = nu.grid.n_theta;
    let s = alpha + lit(2.0);
    let terms: Vec<F> = psi
        .iter()
        .zip(nu.masses())
        .enumerate()
        .map(|(k, (v, m))| {
            let r = nu.grid.radii()[k / n];
            v.abs().powf(p) * (F::one() - r * r).powf(s) * m
        })
        .collect();
    pairwise_sum(&terms).powf(F::one() / p)
}

/// `(S |h|^q)(v) = ( int_{Gamma(v)} q^2 |h|^{2q-2} |h'|^2 dA )^{1/2}`.
pub fn square_area_fn<F: Real>(h: &SymbolSpec<F>, q: F, v: Complex<F>, grid: &DiscGrid<F>) -> Result<F, NormError> {
    let nu = MeasureField::nu(h, q, grid)?;
    let prefix = nu.prefix_of(&nu.masses());
    Ok(nu.region_sum(&prefix, &Region::Stolz(v)).unwrap_or(F::zero()).sqrt())
}

/// `(|h(0)|^p + || S |h|^q ||_{p/q}^{p/q}) / ||h||_{H^p}^p`, all boundary
/// integrals on the unit circle at the grid's angles.
pub fn calderon_ratio<F: Real>(h: &SymbolSpec<F>, p: F, q: F, grid: &DiscGrid<F>) -> Result<F, NormError> {
    let nu = MeasureField::nu(h, q, grid)?;
    let prefix = nu.prefix_of(&nu.masses());
    let sums = stolz_sums(&nu, &prefix, F::one());
    let exponent = p / (q + q);
    let w = F::one() / from_usize::<F>(grid.n_theta);
    let area_part = pairwise_sum(&sums.iter().map(|s| w * s.powf(exponent)).collect::<Vec<_>>());
    let rule = circle_rule(F::one(), grid.n_theta);
    let hp = super::moment(&rule, p, |z| h.value(z).norm())?;
    let h0 = h.value(Complex::new(F::zero(), F::zero())).norm().powf(p);
    Ok((h0 + area_part) / hp)
}

/// `sup_{z in Gamma(v)} |psi(z)|` over grid nodes; 0 (with a warning) when
/// the region misses the grid.
pub fn nt_maximal<F: Real>(psi: &[F], v: Complex<F>, grid: &DiscGrid<F>) -> F {
    let region = Region::Stolz(v);
    let n = grid.n_theta as i64;
    let mut best: Option<F> = None;
    for i in 0..grid.n_r {
        if let Some((lo, hi)) = grid.region_arc(&region, i) {
            for k in lo..=hi {
                let x = psi[i * grid.n_theta + k.rem_euclid(n) as usize].abs();
                best = Some(best.map_or(x, |b: F| b.max(x)));
            }
        }
    }
    best.unwrap_or_else(|| {
        log::warn!("Stolz region at {v} contains no grid node");
        F::zero()
    })
}

/// `|| M f ||_{L^p(T)}` with vertices at the grid angles on the unit circle.
pub fn nt_maximal_lp<F: Real, E: Evaluable<F> + ?Sized>(f: &E, p: F, grid: &DiscGrid<F>) -> Result<F, NormError> {
    let nodes = grid.nodes();
    let psi = nodes
        .par_iter()
        .map(|&z| check(f.value(z).norm(), z))
        .collect::<Result<Vec<F>, _>>()?;
    let arcs = stolz_arcs(grid, F::one());
    let n = grid.n_theta as i64;
    let maxima: Vec<F> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut best = F::zero();
            for (i, a) in arcs.iter().enumerate() {
                if let Some((lo, hi)) = a {
                    for k in (lo + j)..=(hi + j) {
                        best = best.max(psi[i * grid.n_theta + k.rem_euclid(n) as usize]);
                    }
                }
            }
            best.powf(p)
        })
        .collect();
    let w = F::one() / from_usize::<F>(grid.n_theta);
    Ok((pairwise_sum(&maxima) * w).powf(F::one() / p))
}
