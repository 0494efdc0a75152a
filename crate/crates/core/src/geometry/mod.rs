//! Disc automorphisms, the hyperbolic metric, Carleson boxes, Stolz regions
//! and quadrature on the disc and the circle.

mod grid;
pub mod quadrature;

use num_complex::Complex;

pub use grid::{carleson_box_area, circle_rule, DiscGrid, GridError, GridSpec, QuadRule, Region, RingPrefix};
pub use quadrature::{gauss_legendre, gauss_legendre_on, integrate_adaptive};

use crate::scalar::{lit, Real};

/// `phi_a(z) = (a - z) / (1 - conj(a) z)`.
#[inline]
pub fn moebius<F: Real>(a: Complex<F>, z: Complex<F>) -> Complex<F> {
    (a - z) / (Complex::new(F::one(), F::zero()) - a.conj() * z)
}

/// `1 - |phi_a(z)|^2 = (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2`, without
/// the cancellation of the direct formula near the boundary.
#[inline]
pub fn moebius_defect<F: Real>(a: Complex<F>, z: Complex<F>) -> F {
    let d = (Complex::new(F::one(), F::zero()) - a.conj() * z).norm_sqr();
    (F::one() - a.norm_sqr()) * (F::one() - z.norm_sqr()) / d
}

/// Hyperbolic distance `(1/2) log((1 + |phi_w(z)|) / (1 - |phi_w(z)|))`.
pub fn hyperbolic_dist<F: Real>(w: Complex<F>, z: Complex<F>) -> F {
    let p = moebius(w, z).norm();
    lit::<F>(0.5) * ((F::one() + p) / (F::one() - p)).ln()
}

/// Outer radii compared by [`r_max_convergence`].
pub const CONVERGENCE_RADII: [f64; 3] = [0.995, 0.999, 0.9995];

/// `eval` on copies of `spec` whose outer radius runs through
/// [`CONVERGENCE_RADII`], as `(r_max, value)` pairs.
pub fn r_max_convergence<F: Real, E: From<GridError>>(
    spec: GridSpec,
    alphas: &[F],
    eval: impl Fn(&DiscGrid<F>) -> Result<F, E>,
) -> Result<Vec<(f64, F)>, E> {
    CONVERGENCE_RADII
        .iter()
        .map(|&r_max| {
            let grid = DiscGrid::from_spec(GridSpec { r_max, ..spec }, alphas)?;
            Ok((r_max, eval(&grid)?))
        })
        .collect()
}
