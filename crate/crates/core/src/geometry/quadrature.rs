//! One-dimensional rules: Gauss–Legendre and adaptive Gauss–Kronrod.

use std::collections::BinaryHeap;

use crate::scalar::{lit, Real};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Newton iteration on `P_n` from the Tricomi initial guesses; computed in
/// `f64` regardless of the caller's scalar type.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<F: Real>(n: usize, a: F, b: F) -> (Vec<F>, Vec<F>) {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) / lit(2.0);
    let mid = (a + b) / lit(2.0);
    (
        x.iter().map(|&t| mid + half * lit(t)).collect(),
        w.iter().map(|&wi| half * lit(wi)).collect(),
    )
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<G: Fn(f64) -> f64>(f: &G, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive 7/15-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Intervals are bisected worst-first until the summed error estimate is
/// below `max(abs_tol, rel_tol * |I|)` or `max_intervals` is reached.
pub fn integrate_adaptive<G: Fn(f64) -> f64>(f: G, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    const MAX_INTERVALS: usize = 2000;
    struct Part(f64, f64, f64, f64);
    impl PartialEq for Part {
        fn eq(&self, o: &Self) -> bool {
            self.3 == o.3
        }
    }
    impl Eq for Part {}
    impl PartialOrd for Part {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Part {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.3.total_cmp(&o.3)
        }
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = BinaryHeap::from([Part(a, b, v, e)]);
    let (mut total, mut err) = (v, e);
    while err
        > abs_tol
            .max(rel_tol * total.abs())
            .max(64.0 * f64::EPSILON * total.abs())
        && parts.len() < MAX_INTERVALS
    {
        let Part(lo, hi, v0, e0) = parts.pop().expect("non-empty");
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        parts.push(Part(lo, mid, v1, e1));
        parts.push(Part(mid, hi, v2, e2));
    }
    parts.iter().map(|p| p.2).sum()
}
