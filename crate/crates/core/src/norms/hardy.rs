use num_complex::Complex;
use rayon::prelude::*;

use super::{check, Evaluable, NormError};
use crate::geometry::integrate_adaptive;
use crate::geometry::{gauss_legendre_on, DiscGrid};
use crate::scalar::{from_usize, lit, pairwise_sum, to_f64, Real};
use crate::symbols::{grad_abs_pow_parts, SymbolSpec};

/// Relative defect of the Hardy–Stein identity at radius `R`, which is 1 for
/// symbols holomorphic past the closed disc and `grid.r_max` otherwise:
/// `|lhs - rhs| / max(lhs, eps)` with
/// `lhs = mean_theta |g(R e^{i theta})|^{2q} - |g(0)|^{2q}` and
/// `rhs = int_{|z|<R} |grad |g|^q|^2 log(R^2/|z|^2) dA` with `dA` the area
/// measure normalised to mass 1 on the unit disc.
///
/// The area integral uses `n_r` Gauss–Legendre nodes in `s` with `|z|^2 = R^2 s^4`
/// and the trapezoid rule with `n_theta` angles. When `|g|^{2q-2}` is not
/// smooth near a zero of `g` close to the disc, both sides are instead
/// integrated adaptively with breakpoints at the zeros.
pub fn hardy_stein_residual<F: Real>(g: &SymbolSpec<F>, q: F, grid: &DiscGrid<F>) -> Result<F, NormError> {
    let (lhs, rhs) = hardy_stein_sides(g, q, grid)?;
    let eps = lit::<F>(1e-300);
    Ok((lhs - rhs).abs() / lhs.max(eps))
}

/// Both sides of the Hardy–Stein identity, as in [`hardy_stein_residual`].
pub fn hardy_stein_sides<F: Real>(g: &SymbolSpec<F>, q: F, grid: &DiscGrid<F>) -> Result<(F, F), NormError> {
    if !(q > F::zero()) {
        return Err(NormError::Invalid("q must be positive".into()));
    }
    let radius = g.boundary_radius(grid);
    let near: Vec<Complex<f64>> = g
        .known_zeros()
        .into_iter()
        .filter(|z| z.norm() < radius * lit(1.25))
        .map(|z| Complex::new(to_f64(z.re), to_f64(z.im)))
        .collect();
    let smooth_power = q >= F::one() && q == q.round();
    if !near.is_empty() && !smooth_power {
        return adaptive_sides(g, q, radius, &near);
    }
    let r2 = radius * radius;
    let roots = grid.unit_roots();
    let n_theta = from_usize::<F>(grid.n_theta);
    let two_q = q + q;

    let circle = roots
        .iter()
        .map(|u| {
            let z = *u * radius;
            check(g.value(z).norm().powf(two_q), z)
        })
        .collect::<Result<Vec<F>, _>>()?;
    let origin = Complex::new(F::zero(), F::zero());
    let lhs = pairwise_sum(&circle) / n_theta - g.value(origin).norm().powf(two_q);

    let (s, ws) = gauss_legendre_on(grid.n_r, F::zero(), F::one());
    let rings = s
        .par_iter()
        .zip(&ws)
        .map(|(&s, &w)| {
            let s2 = s * s;
            let u = r2 * s2 * s2;
            let r = u.sqrt();
            let du = lit::<F>(4.0) * r2 * s2 * s * w;
            let log_factor = -lit::<F>(4.0) * s.ln();
            let vals = roots
                .iter()
                .map(|e| {
                    let z = *e * r;
                    let (v, d) = g.eval(z);
                    let t = grad_abs_pow_parts(v, d, q);
                    check(t * t, z)
                })
                .collect::<Result<Vec<F>, _>>()?;
            Ok(pairwise_sum(&vals) / n_theta * log_factor * du)
        })
        .collect::<Result<Vec<F>, NormError>>()?;
    Ok((lhs, pairwise_sum(&rings)))
}

fn adaptive_sides<F: Real>(g: &SymbolSpec<F>, q: F, radius: F, zeros: &[Complex<f64>]) -> Result<(F, F), NormError> {
    use std::f64::consts::TAU;
    let big_r = to_f64(radius);
    let qf = to_f64(q);
    let bad = std::sync::Mutex::new(None);
    let at = |r: f64, t: f64| -> Complex<F> { Complex::from_polar(lit::<F>(r), lit::<F>(t)) };
    let flag = |x: f64, z: Complex<F>| {
        if !x.is_finite() {
            bad.lock().expect("flag lock").get_or_insert(z);
        }
        if x.is_finite() {
            x
        } else {
            0.0
        }
    };

    // angular breakpoints at the zeros' arguments, starting from the first one
    let mut cuts: Vec<f64> = zeros.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let start = cuts[0];
    let mut edges: Vec<f64> = cuts.iter().map(|c| c - start).collect();
    edges.push(TAU);
    let around = |f: &dyn Fn(f64) -> f64, rel: f64| -> f64 {
        edges
            .windows(2)
            .map(|w| integrate_adaptive(|t| f(start + t), w[0], w[1], 1e-300, rel))
            .sum::<f64>()
    };

    let circle = around(
        &|t| {
            let z = at(big_r, t);
            flag(to_f64(g.value(z).norm()).powf(2.0 * qf), z)
        },
        1e-13,
    );
    let origin = Complex::new(F::zero(), F::zero());
    let lhs = circle / TAU - to_f64(g.value(origin).norm()).powf(2.0 * qf);

    let ring = |r: f64| -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let m = around(
            &|t| {
                let z = at(r, t);
                let (v, d) = g.eval(z);
                let x = to_f64(grad_abs_pow_parts(v, d, q));
                flag(x * x, z)
            },
            1e-10,
        );
        m * r * 2.0 * (big_r / r).ln() / std::f64::consts::PI
    };
    let mut radial: Vec<f64> = zeros
        .iter()
        .map(|z| z.norm())
        .filter(|&x| x > 0.0 && x < big_r)
        .collect();
    radial.push(0.0);
    radial.push(big_r);
    radial.sort_by(f64::total_cmp);
    radial.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let rhs: f64 = radial
        .par_windows(2)
        .map(|w| integrate_adaptive(ring, w[0], w[1], 1e-300, 1e-9))
        .sum();
    if let Some(z) = bad.into_inner().expect("flag lock") {
        return Err(NormError::NonFinite([to_f64(z.re), to_f64(z.im)]));
    }
    Ok((lit(lhs), lit(rhs)))
}

/// `(w_alpha(x), psi_alpha(x))` with `t = x^2`,
/// `w_alpha = (1-t)^{alpha+1} log(1/t) - (alpha+1) int_t^1 (1-r)^alpha log(1/r) dr`
/// and `psi_alpha` the ratio of the subtracted integral to the first term.
pub fn weight_w_alpha<F: Real>(x: F, alpha: F) -> (F, F) {
    let xf = to_f64(x);
    let a = to_f64(alpha);
    let t = xf * xf;
    if t <= 0.0 {
        return (F::infinity(), F::zero());
    }
    if t >= 1.0 {
        return (F::zero(), lit((a + 1.0) / (a + 2.0)));
    }
    let gap = 1.0 - t;
    // int_t^1 (1-r)^a log(1/r) dr = gap^{a+1} * j with r = 1 - gap v
    let j = integrate_adaptive(
        |v: f64| {
            if v <= 0.0 {
                0.0
            } else {
                v.powf(a) * -(-gap * v).ln_1p()
            }
        },
        0.0,
        1.0,
        1e-300,
        1e-14,
    );
    let log_inv = -t.ln();
    let psi = (a + 1.0) * j / log_inv;
    let w = gap.powf(a + 1.0) * (log_inv - (a + 1.0) * j);
    (lit(w), lit(psi))
}
