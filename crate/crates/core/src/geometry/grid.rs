use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::quadrature::gauss_legendre_on;
use crate::scalar::{from_usize, lit, to_f64, wrap_angle, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs n_r >= 4 and n_theta >= 4 (got {n_r} x {n_theta})")]
    TooSmall { n_r: usize, n_theta: usize },
    #[error("r_max = {0} must lie in (0, 1)")]
    BadRadius(f64),
    #[error("alpha = {0} must be >= -1")]
    BadAlpha(f64),
}

/// Grid parameters as they appear in config files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_r: 400,
            n_theta: 512,
            r_max: 0.9995,
        }
    }
}

/// Points with weights; integrals are `sum w_i f(z_i)`.
#[derive(Clone, Debug)]
pub struct QuadRule<F> {
    pub points: Vec<Complex<F>>,
    pub weights: Vec<F>,
}

impl<F: Real> QuadRule<F> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> F {
        crate::scalar::pairwise_sum(&self.weights)
    }
}

/// Trapezoid rule on the circle `|z| = radius` for normalised arc length.
pub fn circle_rule<F: Real>(radius: F, n: usize) -> QuadRule<F> {
    let w = F::one() / from_usize::<F>(n);
    QuadRule {
        points: (0..n)
            .map(|j| Complex::from_polar(radius, F::TAU() * from_usize::<F>(j) / from_usize::<F>(n)))
            .collect(),
        weights: vec![w; n],
    }
}

/// Tensor rule on `|z| < r_max`: Gauss–Legendre in `u = |z|^2` on
/// `[0, r_max^2]` times the trapezoid rule in the angle.
///
/// Nodes are ring-major: node `(i, j)` is `radii[i] * exp(2 pi i j / n_theta)`.
#[derive(Clone, Debug)]
pub struct DiscGrid<F> {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: F,
    radii: Vec<F>,
    /// Gauss weights in `u`; they sum to `r_max^2`.
    u_weights: Vec<F>,
    unit: Vec<Complex<F>>,
    alphas: Vec<F>,
    alpha_weights: Vec<Vec<F>>,
}

impl<F: Real> DiscGrid<F> {
    pub fn new(n_r: usize, n_theta: usize, r_max: F, alphas: &[F]) -> Result<Self, GridError> {
        if n_r < 4 || n_theta < 4 {
            return Err(GridError::TooSmall { n_r, n_theta });
        }
        if !(r_max > F::zero() && r_max < F::one()) {
            return Err(GridError::BadRadius(to_f64(r_max)));
        }
        if let Some(a) = alphas.iter().find(|&&a| !(a >= -F::one())) {
            return Err(GridError::BadAlpha(to_f64(*a)));
        }
        let (us, u_weights) = gauss_legendre_on(n_r, F::zero(), r_max * r_max);
        let radii = us.iter().map(|u| u.sqrt()).collect();
        let unit = (0..n_theta)
            .map(|j| {
                let t = F::TAU() * from_usize::<F>(j) / from_usize::<F>(n_theta);
                Complex::new(t.cos(), t.sin())
            })
            .collect();
        let mut grid = Self {
            n_r,
            n_theta,
            r_max,
            radii,
            u_weights,
            unit,
            alphas: Vec::new(),
            alpha_weights: Vec::new(),
        };
        for &a in alphas {
            grid.ensure_alpha(a);
        }
        Ok(grid)
    }

    pub fn from_spec(spec: GridSpec, alphas: &[F]) -> Result<Self, GridError> {
        Self::new(spec.n_r, spec.n_theta, lit(spec.r_max), alphas)
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            n_r: self.n_r,
            n_theta: self.n_theta,
            r_max: to_f64(self.r_max),
        }
    }

    fn ensure_alpha(&mut self, alpha: F) {
        if alpha <= -F::one() || self.alphas.contains(&alpha) {
            return;
        }
        let n = from_usize::<F>(self.n_theta);
        let w = self
            .radii
            .iter()
            .zip(&self.u_weights)
            .map(|(r, wu)| (alpha + F::one()) * (F::one() - *r * *r).powf(alpha) * *wu / n)
            .collect();
        self.alphas.push(alpha);
        self.alpha_weights.push(w);
    }

    pub fn radii(&self) -> &[F] {
        &self.radii
    }

    pub fn unit_roots(&self) -> &[Complex<F>] {
        &self.unit
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Complex<F> {
        self.unit[j] * self.radii[i]
    }

    pub fn theta(&self, j: usize) -> F {
        F::TAU() * from_usize::<F>(j) / from_usize::<F>(self.n_theta)
    }

    /// All nodes, ring-major.
    pub fn nodes(&self) -> Vec<Complex<F>> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_r {
            for j in 0..self.n_theta {
                out.push(self.node(i, j));
            }
        }
        out
    }

    /// Weight of every node on ring `i` for `dA` (area normalised to 1 on
    /// the full disc).
    pub fn area_weight(&self, i: usize) -> F {
        self.u_weights[i] / from_usize::<F>(self.n_theta)
    }

    /// Per-ring node weights for `dA_alpha`, `alpha > -1`.
    pub fn alpha_ring_weights(&self, alpha: F) -> Vec<F> {
        if let Some(k) = self.alphas.iter().position(|&a| a == alpha) {
            return self.alpha_weights[k].clone();
        }
        let n = from_usize::<F>(self.n_theta);
        self.radii
            .iter()
            .zip(&self.u_weights)
            .map(|(r, wu)| (alpha + F::one()) * (F::one() - *r * *r).powf(alpha) * *wu / n)
            .collect()
    }

    /// Rule for `dA_alpha` on the disc, or for normalised arc length on
    /// `|z| = boundary_radius` when `alpha = -1`.
    pub fn rule(&self, alpha: F, boundary_radius: F) -> QuadRule<F> {
        if alpha <= -F::one() {
            return circle_rule(boundary_radius, self.n_theta);
        }
        let rw = self.alpha_ring_weights(alpha);
        let mut weights = Vec::with_capacity(self.len());
        for w in &rw {
            weights.extend(std::iter::repeat_n(*w, self.n_theta));
        }
        QuadRule {
            points: self.nodes(),
            weights,
        }
    }

    /// Nodes for grid suprema: origin, the disc nodes and the ring `r_max`.
    pub fn sup_points(&self) -> Vec<Complex<F>> {
        let mut pts = Vec::with_capacity(1 + self.len() + self.n_theta);
        pts.push(Complex::new(F::zero(), F::zero()));
        pts.extend(self.nodes());
        pts.extend(self.unit.iter().map(|u| *u * self.r_max));
        pts
    }

    /// Angular index range (possibly wrapping, as unreduced integers) of the
    /// nodes on a ring with `|wrap(theta_j - center)| <= half_width`.
    pub fn arc_indices(&self, center: F, half_width: F) -> Option<(i64, i64)> {
        if half_width < F::zero() {
            return None;
        }
        let n = self.n_theta as i64;
        if half_width >= F::PI() {
            return Some((0, n - 1));
        }
        let step = F::TAU() / from_usize::<F>(self.n_theta);
        let lo = ((center - half_width) / step).ceil().to_i64()?;
        let hi = ((center + half_width) / step).floor().to_i64()?;
        if hi < lo {
            return None;
        }
        Some((lo, hi.min(lo + n - 1)))
    }

    /// Angular index range of ring `i` inside `region`, with the ends checked
    /// against the exact membership predicate.
    pub fn region_arc(&self, region: &Region<F>, i: usize) -> Option<(i64, i64)> {
        let r = self.radii[i];
        let (center, half) = region.ring_arc(r)?;
        let (mut lo, mut hi) = self.arc_indices(center, half + lit(1e-12))?;
        let n = self.n_theta as i64;
        let at = |k: i64| self.node(i, k.rem_euclid(n) as usize);
        while lo <= hi && !region.contains(at(lo)) {
            lo += 1;
        }
        while hi >= lo && !region.contains(at(hi)) {
            hi -= 1;
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Per-ring prefix sums of a ring-major field for `O(1)` arc sums.
#[derive(Clone, Debug)]
pub struct RingPrefix<F> {
    n_theta: usize,
    prefix: Vec<F>,
}

impl<F: Real> RingPrefix<F> {
    pub fn new(n_r: usize, n_theta: usize, values: &[F]) -> Self {
        assert_eq!(values.len(), n_r * n_theta);
        let mut prefix = Vec::with_capacity(n_r * (n_theta + 1));
        for i in 0..n_r {
            let mut acc = F::zero();
            prefix.push(acc);
            for j in 0..n_theta {
                acc = acc + values[i * n_theta + j];
                prefix.push(acc);
            }
        }
        Self { n_theta, prefix }
    }

    /// Sum over angular indices `lo..=hi` on ring `i` (indices may wrap).
    pub fn arc_sum(&self, i: usize, lo: i64, hi: i64) -> F {
        let n = self.n_theta as i64;
        let row = &self.prefix[i * (self.n_theta + 1)..(i + 1) * (self.n_theta + 1)];
        if hi - lo + 1 >= n {
            return row[self.n_theta];
        }
        let a = lo.rem_euclid(n) as usize;
        let b = hi.rem_euclid(n) as usize;
        if a <= b {
            row[b + 1] - row[a]
        } else {
            row[self.n_theta] - row[a] + row[b + 1]
        }
    }
}

/// Carleson boxes and Stolz regions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region<F> {
    /// `S(a) = { r e^{it} : |a| <= r < 1, |t - arg a| <= pi (1 - |a|) }`.
    CarlesonBox(Complex<F>),
    /// `{ z : |z - v| < 2 (|v| - |z|) }`, the region `|v| Gamma(v/|v|)`.
    Stolz(Complex<F>),
}

impl<F: Real> Region<F> {
    pub fn contains(&self, z: Complex<F>) -> bool {
        match *self {
            Region::CarlesonBox(a) => {
                let rho = a.norm();
                let r = z.norm();
                if r < rho || r >= F::one() {
                    return false;
                }
                rho == F::zero() || wrap_angle(z.arg() - a.arg()).abs() <= F::PI() * (F::one() - rho)
            }
            Region::Stolz(v) => (z - v).norm() < lit::<F>(2.0) * (v.norm() - z.norm()),
        }
    }

    /// Angular centre and half width of the region's trace on `|z| = r`;
    /// `None` when the trace is empty.
    pub fn ring_arc(&self, r: F) -> Option<(F, F)> {
        match *self {
            Region::CarlesonBox(a) => {
                let rho = a.norm();
                if r < rho || r >= F::one() {
                    return None;
                }
                Some((a.arg(), F::PI() * (F::one() - rho)))
            }
            Region::Stolz(v) => {
                let rho = v.norm();
                if r >= rho {
                    return None;
                }
                if r == F::zero() {
                    return Some((v.arg(), F::PI()));
                }
                let four = lit::<F>(4.0);
                let c = (r * r + rho * rho - four * (rho - r) * (rho - r)) / (lit::<F>(2.0) * r * rho);
                if c >= F::one() {
                    return None;
                }
                if c <= -F::one() {
                    return Some((v.arg(), F::PI()));
                }
                Some((v.arg(), c.acos()))
            }
        }
    }
}

/// Normalised area `A(S(a)) = (1 - |a|)(1 - |a|^2)` of a Carleson box.
pub fn carleson_box_area<F: Real>(a: Complex<F>) -> F {
    let rho = a.norm();
    (F::one() - rho) * (F::one() - rho * rho)
}
