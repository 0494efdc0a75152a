//! Exact identities of the operator algebra on random polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use paraword_core::series::{
    apply_expr, exact_series_from_json, exact_series_to_json, ExactSeries, GaussianRational, PowerSeries,
};
use paraword_core::wordalg::{
    parse_expr, random_polynomial, reduce_h0, st_form_full, st_form_h0, verify_identity, Letter, OperatorExpr, Term,
    Word,
};

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..3, 1..=max_len)
        .prop_map(|ix| Word::new(ix.into_iter().map(|k| Letter::ALL[k]).collect()))
}

fn expr(text: &str) -> OperatorExpr {
    parse_expr(text).unwrap()
}

fn polys(seed: u64, deg: usize, h0: bool) -> (ExactSeries, ExactSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_polynomial(&mut rng, deg, false);
    let f = random_polynomial(&mut rng, deg, h0);
    (g, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h0_form_agrees_on_functions_vanishing_at_zero(w in word_strategy(5), seed in any::<u64>()) {
        let (_, m, n) = w.counts();
        prop_assume!(m + n >= 1);
        let rhs = st_form_h0(&w).unwrap();
        let v = verify_identity(&OperatorExpr::from_word(w), &rhs, 3, 6, true, seed).unwrap();
        prop_assert!(v.is_equal());
    }

    #[test]
    fn full_form_agrees_everywhere(w in word_strategy(5), seed in any::<u64>()) {
        let (l, m, n) = w.counts();
        prop_assume!(m + n >= 1 && l + m >= 1);
        let rhs = st_form_full(&w).unwrap().to_expr();
        let v = verify_identity(&OperatorExpr::from_word(w), &rhs, 3, 6, false, seed).unwrap();
        prop_assert!(v.is_equal());
    }

    #[test]
    fn leading_coefficient_is_one(w in word_strategy(6)) {
        let (l, m, n) = w.counts();
        prop_assume!(n >= 1);
        let form = st_form_h0(&w).unwrap();
        let lead = Term::new(Word::st(l + m, n), false);
        prop_assert_eq!(form.coeff(&lead), BigRational::from_integer(BigInt::from(1)));
        prop_assert!(form.has_integer_coeffs());
    }

    #[test]
    fn rewriting_is_deterministic(w in word_strategy(6)) {
        let (_, m, n) = w.counts();
        prop_assume!(m + n >= 1);
        prop_assert_eq!(st_form_full(&w).unwrap(), st_form_full(&w.clone()).unwrap());
        prop_assert_eq!(st_form_h0(&w).unwrap(), st_form_h0(&w).unwrap());
    }

    #[test]
    fn t_and_s_vanish_at_zero(seed in any::<u64>()) {
        let (g, f) = polys(seed, 6, false);
        for text in ["T", "S", "T S M", "S^2 T"] {
            let out = apply_expr(&expr(text), &g, &f).unwrap();
            prop_assert_eq!(out.value_at_zero(), GaussianRational::from_integer(0));
        }
        let (g, f0) = polys(seed, 6, true);
        let out = apply_expr(&expr("M"), &g, &f0).unwrap();
        prop_assert_eq!(out.value_at_zero(), GaussianRational::from_integer(0));
    }

    #[test]
    fn multiplication_splits(seed in any::<u64>()) {
        let (g, f) = polys(seed, 6, false);
        let m = apply_expr(&expr("M"), &g, &f).unwrap();
        let ts = apply_expr(&expr("T + S"), &g, &f).unwrap();
        let point = PowerSeries::constant(g.value_at_zero() * f.value_at_zero());
        prop_assert_eq!(m, ts.add(&point).unwrap());
    }

    #[test]
    fn s_powers_collapse_onto_t(seed in any::<u64>(), m in 0usize..=4) {
        let (g, f) = polys(seed, 5, false);
        let lhs = apply_expr(&OperatorExpr::from_word(Word::st(m, 1)), &g, &f).unwrap();
        let mut gm = PowerSeries::one();
        for _ in 0..=m {
            gm = gm.mul(&g).unwrap();
        }
        let t = apply_expr(&expr("T"), &gm, &f).unwrap();
        let scale = GaussianRational::real(BigRational::new(1.into(), BigInt::from(m + 1)));
        prop_assert_eq!(lhs, t.scale(&scale));
    }

    #[test]
    fn series_json_round_trip(seed in any::<u64>()) {
        let (g, _) = polys(seed, 8, false);
        prop_assert_eq!(exact_series_from_json(&exact_series_to_json(&g)).unwrap(), g);
    }
}

#[test]
fn t_power_past_s() {
    for n in 1..=6 {
        let lhs = expr(&format!("T^{n} S"));
        let rhs = expr(&format!("S T^{n} - {n} T^{}", n + 1));
        assert!(
            verify_identity(&lhs, &rhs, 5, 6, true, n as u64).unwrap().is_equal(),
            "n = {n}"
        );
    }
}

#[test]
fn t_past_s_powers() {
    let factorial = |k: u64| (1..=k).product::<u64>();
    for m in 0..=5u64 {
        let lhs = expr(&format!("T S^{m}"));
        let mut rhs = OperatorExpr::zero();
        for j in 0..=m {
            let sign = if (m - j) % 2 == 0 { 1 } else { -1 };
            let c = sign * (factorial(m) / factorial(j)) as i64;
            rhs = rhs.add(&expr(&format!("{c} S^{j} T^{}", m - j + 1)));
        }
        assert!(
            verify_identity(&lhs, &rhs, 5, 6, true, 40 + m).unwrap().is_equal(),
            "m = {m}"
        );

        let mut diff = OperatorExpr::identity();
        for _ in 0..m {
            diff = diff.compose(&expr("S - T")).unwrap();
        }
        let direct = diff.compose(&expr("T")).unwrap();
        assert!(
            verify_identity(&lhs, &direct, 5, 6, true, 80 + m).unwrap().is_equal(),
            "m = {m}"
        );
        assert_eq!(reduce_h0(&direct), rhs, "m = {m}");
    }
}
