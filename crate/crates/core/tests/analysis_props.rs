//! Properties of symbols, grids and the norm functionals.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

use paraword_core::geometry::{carleson_box_area, hyperbolic_dist, moebius, DiscGrid, Region};
use paraword_core::norms::{
    apalpha_norm, bloch_q_seminorm, bold_seminorm, default_a_grid, garsia_seminorm, weight_w_alpha,
};
use paraword_core::series::GaussianRational;
use paraword_core::{Grid, Symbol};

fn small_grid() -> Grid {
    DiscGrid::new(64, 96, 0.999, &[0.0, 1.0, 2.0]).unwrap()
}

fn point(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

fn scaled_poly(coeffs: &[i64], c: i64) -> Symbol {
    Symbol::poly_from_ints(&coeffs.iter().map(|a| a * c).collect::<Vec<_>>())
}

/// `int_0^R2 (a+1) u^k (1-u)^a du` for integer `a`, by binomial expansion.
fn truncated_beta(k: i32, a: i32, r2: f64) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=a {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom * r2.powi(k + j + 1) / f64::from(k + j + 1);
        binom *= f64::from(a - j) / f64::from(j + 1);
    }
    f64::from(a + 1) * total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gradient_formula_matches_differences(r in 0.05f64..0.9, t in 0.0..TAU, qi in 0usize..4, which in 0usize..3) {
        let q = [0.5, 1.0, 1.5, 2.0][qi];
        let g = [Symbol::log_e(), Symbol::pow_log_e(0.5), Symbol::poly_from_ints(&[2, 1, 3])][which].clone();
        let z = point(r, t);
        let h = 1e-5;
        let u = |w: Complex64| g.value(w).norm().powf(q);
        let dx = (u(z + h) - u(z - h)) / (2.0 * h);
        let dy = (u(z + Complex64::i() * h) - u(z - Complex64::i() * h)) / (2.0 * h);
        let want = dx.hypot(dy);
        let got = g.grad_abs_pow(z, q);
        prop_assert!((got - want).abs() <= 1e-6 * want.max(1e-3), "{got} vs {want}");
    }

    #[test]
    fn blaschke_products_are_inner(a in 0.0f64..0.95, t in 0.0..TAU, s in 0.0..TAU, r in 0.0f64..0.99) {
        let g = Symbol::blaschke(vec![point(a, t), point(0.5, 1.0)]).unwrap();
        prop_assert!(g.value(point(r, s)).norm() < 1.0);
        let far = (s - t).rem_euclid(TAU).min((t - s).rem_euclid(TAU));
        prop_assume!(far > 0.05 && (s - 1.0).abs() > 0.05);
        prop_assert!(g.value(point(0.999, s)).norm() > 0.9);
    }

    #[test]
    fn stolz_regions_rotate(r in 0.1f64..0.95, t in 0.0..TAU, rho in 0.0f64..0.99, s in 0.0..TAU, tau in 0.0..TAU) {
        let z = point(rho, s);
        let rot = point(1.0, tau);
        let here = Region::Stolz(point(r, t)).contains(z);
        let there = Region::Stolz(point(r, t) * rot).contains(z * rot);
        let margin = (z - point(r, t)).norm() - 2.0 * (r - rho);
        prop_assume!(margin.abs() > 1e-9);
        prop_assert_eq!(here, there);
    }

    #[test]
    fn box_area_band(a in 0.0f64..0.99, t in 0.0..TAU) {
        let ratio = carleson_box_area(point(a, t)) / (1.0 - a).powi(2);
        prop_assert!((1.0..=4.0 * std::f64::consts::PI).contains(&ratio), "{ratio}");
    }

    #[test]
    fn psi_stays_below_one(x in 0.001f64..0.999, ai in 0usize..3) {
        let (w, psi) = weight_w_alpha(x, [0.0, 1.0, 2.0][ai]);
        prop_assert!(psi > 0.0 && psi < 1.0);
        prop_assert!(w > 0.0);
    }

    #[test]
    fn seminorms_are_homogeneous(c in 1i64..6, q in 1.0f64..2.5) {
        let grid = small_grid();
        let a_grid = default_a_grid();
        let base = [1, 2, -1];
        let g = scaled_poly(&base, 1);
        let cg = scaled_poly(&base, c);
        let c = c as f64;
        let b1 = bloch_q_seminorm(&g, q, &grid, false).unwrap().value;
        let b2 = bloch_q_seminorm(&cg, q, &grid, false).unwrap().value;
        prop_assert!((b2 - c * b1).abs() <= 1e-9 * b2);
        let g1 = garsia_seminorm(&g, 0.0, q, &a_grid, &grid).unwrap().value;
        let g2 = garsia_seminorm(&cg, 0.0, q, &a_grid, &grid).unwrap().value;
        prop_assert!((g2 - c * g1).abs() <= 1e-9 * g2);
        let o1 = bold_seminorm(&g, -1.0, q, &a_grid, &grid).unwrap().value;
        let o2 = bold_seminorm(&cg, -1.0, q, &a_grid, &grid).unwrap().value;
        prop_assert!((o2 - c * o1).abs() <= 1e-9 * o2);
    }
}

#[test]
fn monomial_integrals_match_beta() {
    let grid = DiscGrid::new(64, 8, 0.9995, &[0.0, 1.0, 2.0]).unwrap();
    for a in 0..=2 {
        for k in 0..=20 {
            let zk = {
                let mut c = vec![GaussianRational::from_integer(0); k + 1];
                c[k] = GaussianRational::from_integer(1);
                Symbol::polynomial(c)
            };
            let got = apalpha_norm(&zk, 2.0, f64::from(a), &grid).unwrap().powi(2);
            let want = truncated_beta(k as i32, a, 0.9995f64.powi(2));
            assert!(
                (got - want).abs() <= 1e-8 * want,
                "k = {k}, alpha = {a}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn seminorms_vanish_on_constants() {
    let grid = small_grid();
    let c = Symbol::constant(3);
    let a = default_a_grid();
    assert_eq!(bloch_q_seminorm(&c, 1.5, &grid, false).unwrap().value, 0.0);
    assert!(garsia_seminorm(&c, 0.0, 2.0, &a, &grid).unwrap().value.abs() < 1e-12);
    assert!(bold_seminorm(&c, -1.0, 2.0, &a, &grid).unwrap().value.abs() < 1e-12);
}

#[test]
fn bold_weighted_below_hardy_case() {
    let grid = small_grid();
    let a = default_a_grid();
    for g in [Symbol::identity(), Symbol::log_e(), Symbol::pow_log_e(0.5)] {
        for q in [1.0, 2.0] {
            let hardy = bold_seminorm(&g, -1.0, q, &a, &grid).unwrap().value;
            for alpha in [0.0, 1.0] {
                let w = bold_seminorm(&g, alpha, q, &a, &grid).unwrap().value;
                assert!(w <= hardy * 1.02, "{} q={q} alpha={alpha}: {w} > {hardy}", g.label());
            }
        }
    }
}

#[test]
fn conformal_invariance_on_automorphisms() {
    let grid = DiscGrid::new(200, 256, 0.9995, &[0.0]).unwrap();
    let a = default_a_grid();
    let zero = point(0.3, 0.0);
    for b in [point(0.4, 1.57), point(0.6, 3.0)] {
        let g = Symbol::blaschke(vec![zero]).unwrap();
        let moved = Symbol::blaschke(vec![moebius(b, zero)]).unwrap();
        for (name, f) in [
            (
                "garsia",
                garsia_seminorm as fn(&Symbol, f64, f64, &[Complex64], &Grid) -> _,
            ),
            ("bold", bold_seminorm),
        ] {
            let x = f(&g, -1.0, 2.0, &a, &grid).unwrap().value;
            let y = f(&moved, -1.0, 2.0, &a, &grid).unwrap().value;
            assert!((x / y - 1.0).abs() < 0.02, "{name}: {x} vs {y}");
        }
    }
}

#[test]
fn triangle_inequality_fails_for_q_two() {
    let grid = small_grid();
    let lhs = bloch_q_seminorm(&Symbol::poly_from_ints(&[10, 1]), 2.0, &grid, false)
        .unwrap()
        .value;
    let z = bloch_q_seminorm(&Symbol::identity(), 2.0, &grid, false).unwrap().value;
    let c = bloch_q_seminorm(&Symbol::constant(10), 2.0, &grid, false)
        .unwrap()
        .value;
    assert!(lhs > z + c, "{lhs} <= {z} + {c}");
}

#[test]
fn hyperbolic_lipschitz_bound() {
    let grid = DiscGrid::new(120, 128, 0.99, &[0.0]).unwrap();
    let q = 1.5;
    for g in [Symbol::log_e(), Symbol::poly_from_ints(&[1, 2, 1])] {
        let rep = bloch_q_seminorm(&g, q, &grid, false).unwrap();
        let bound = rep.value.powf(q);
        let u = |z: Complex64| g.value(z).norm().powf(q);
        let mut best: f64 = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                let w = point(0.98 * f64::from(i) / 40.0, 0.157 * f64::from(i * 7 + j));
                let z = point(0.98 * f64::from(j) / 40.0, 0.311 * f64::from(j * 3 + i));
                let d = hyperbolic_dist(w, z);
                if d > 1e-9 {
                    best = best.max((u(w) - u(z)).abs() / d);
                }
            }
        }
        assert!(best <= bound * 1.02, "{}: {best} > {bound}", g.label());
        // near the argmax the quotient approaches the seminorm
        let [x, y] = rep.argmax.unwrap();
        let z = Complex64::new(x, y);
        let (v, d) = g.eval(z);
        let grad = v * d.conj();
        let w = z + grad / grad.norm() * (1e-4 * (1.0 - z.norm_sqr()));
        let local = (u(w) - u(z)).abs() / hyperbolic_dist(w, z);
        assert!(local >= 0.9 * bound, "{}: {local} < 0.9 * {bound}", g.label());
    }
}
