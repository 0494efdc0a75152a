//! Operator-norm lower bounds against closed forms and seminorm bands.

use paraword_core::geometry::DiscGrid;
use paraword_core::norms::bloch_q_seminorm;
use paraword_core::opnorm::{op_lower_bound, plateaus, q_op_lower_bound, TestFamily};
use paraword_core::wordalg::{parse_expr, Word};
use paraword_core::{Grid, Symbol};

fn grid() -> Grid {
    DiscGrid::new(200, 256, 0.9995, &[0.0]).unwrap()
}

#[test]
fn t_of_identity_on_hardy_space() {
    let v = op_lower_bound(
        &parse_expr("T").unwrap(),
        &Symbol::identity(),
        2.0,
        -1.0,
        &TestFamily::Monomials(10),
        None,
        false,
        &grid(),
    )
    .unwrap();
    // T_z z^k = z^{k+1}/(k+1) has Hardy norm 1/(k+1)
    assert!((v.value - 1.0).abs() < 1e-12);
    assert_eq!(v.params["member"], 0.0);
}

#[test]
fn q_operator_of_identity_on_constants() {
    let grid = DiscGrid::new(200, 64, 0.999_999, &[0.0]).unwrap();
    let v = q_op_lower_bound(
        1.0,
        1,
        &Symbol::identity(),
        2.0,
        0.0,
        &TestFamily::Monomials(0),
        None,
        false,
        &grid,
    )
    .unwrap()
    .value;
    // |z| T_z 1 = |z| z and the area integral of |z|^4 is 1/3
    assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-5, "{v}");
}

#[test]
fn larger_family_never_lowers_the_bound() {
    let grid = grid();
    let e = parse_expr("S T T").unwrap();
    let g = Symbol::log_e().dilate(0.9).unwrap();
    let mut last = 0.0;
    for fam in [
        TestFamily::Monomials(2),
        TestFamily::Monomials(6),
        TestFamily::Union(vec![
            TestFamily::Monomials(6),
            TestFamily::BergmanKernels(vec![[0.9, 0.0]]),
        ]),
        TestFamily::standard(),
    ] {
        let v = op_lower_bound(&e, &g, 2.0, 0.0, &fam, None, false, &grid)
            .unwrap()
            .value;
        assert!(v >= last, "{v} < {last}");
        last = v;
    }
}

#[test]
fn q_operator_tracks_s_t_squared() {
    let grid = grid();
    let e = parse_expr("S T^2").unwrap();
    let fam = TestFamily::standard_restricted();
    let mut ratios = Vec::new();
    for r in [0.8, 0.9, 0.99] {
        let g = Symbol::log_e().dilate(r).unwrap();
        let st = op_lower_bound(&e, &g, 2.0, 0.0, &fam, None, true, &grid).unwrap().value;
        let q = q_op_lower_bound(0.5, 2, &g, 2.0, 0.0, &fam, None, true, &grid)
            .unwrap()
            .value;
        ratios.push(q / st);
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(lo >= 1.0 / 8.0 && hi <= 8.0, "{ratios:?}");
}

#[test]
fn sum_of_words_follows_the_common_bloch_class() {
    // S^4 T^2 + S^2 T: both words have Bloch exponent 3; the longer one has 6 letters
    let grid = grid();
    let e = parse_expr("S^4 T^2 + S^2 T").unwrap();
    let r = [0.99, 0.999];
    for beta in [0.25, 1.0 / 3.0, 0.5, 1.0] {
        let mut op = Vec::new();
        let mut sem = Vec::new();
        for &rr in &r {
            let g = Symbol::pow_log_e(beta).dilate(rr).unwrap();
            op.push(
                op_lower_bound(&e, &g, 2.0, 0.0, &TestFamily::standard(), None, false, &grid)
                    .unwrap()
                    .value,
            );
            sem.push(bloch_q_seminorm(&g, 3.0, &grid, false).unwrap().value.powi(6));
        }
        assert_eq!(
            plateaus(&r, &op),
            plateaus(&r, &sem),
            "beta = {beta}: {op:?} vs {sem:?}"
        );
    }
}

#[test]
fn product_words_are_dominated_by_factor_seminorms() {
    let grid = grid();
    let (w1, w2) = (Word::parse("S T").unwrap(), Word::parse("S T T").unwrap());
    let joined = w1.concat(&w2);
    let exps = |w: &Word| {
        let (l, m, n) = w.counts();
        ((l + m) as f64 / n as f64 + 1.0, (l + m + n) as i32)
    };
    let ((s1, n1), (s2, n2), (s, n)) = (exps(&w1), exps(&w2), exps(&joined));
    for g in [
        Symbol::identity(),
        Symbol::poly_from_ints(&[1, 2, 1]),
        Symbol::log_e().dilate(0.99).unwrap(),
        Symbol::pow_log_e(0.5).dilate(0.99).unwrap(),
    ] {
        let b = |q: f64| bloch_q_seminorm(&g, q, &grid, false).unwrap().value;
        let ratio = b(s).powi(n) / (b(s1).powi(n1) * b(s2).powi(n2));
        assert!(ratio <= 4.0, "{}: {ratio}", g.label());
    }
}
