use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::scaled::{apply_scaled, ScaledPoly};
use super::{OperatorExpr, WordError};
use crate::series::{ExactSeries, GaussianRational, PowerSeries};

/// Counterexample found by [`verify_identity`].
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub trial: usize,
    pub g: ExactSeries,
    pub f: ExactSeries,
    pub lhs: ExactSeries,
    pub rhs: ExactSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equal { trials: usize },
    Unequal(Box<Witness>),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> (i64, i64) {
    (rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// Polynomial with degree uniform in `1..=max_deg` and coefficients
/// `p/q + i p'/q'`, `|p| <= 9`, `1 <= q <= 9`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_deg: usize, vanish_at_zero: bool) -> ExactSeries {
    let deg = rng.gen_range(1..=max_deg);
    let coeffs = (0..=deg)
        .map(|k| {
            let (a, b) = small_rational(rng);
            let (c, d) = small_rational(rng);
            if k == 0 && vanish_at_zero {
                GaussianRational::from_integer(0)
            } else {
                GaussianRational::from_ints(a, b, c, d)
            }
        })
        .collect();
    PowerSeries::polynomial(coeffs)
}

/// Checks `a == b` exactly on `trials` random polynomial pairs `(g, f)`.
///
/// With `h0_only` every `f` vanishes at 0. The pairs are drawn up front
/// from a seeded stream, so the reported witness depends only on `seed`.
pub fn verify_identity(
    a: &OperatorExpr,
    b: &OperatorExpr,
    trials: usize,
    max_deg: usize,
    h0_only: bool,
    seed: u64,
) -> Result<Verdict, WordError> {
    if trials == 0 {
        return Err(WordError::InvalidArgument("trials must be at least 1".into()));
    }
    if max_deg == 0 {
        return Err(WordError::InvalidArgument("max_deg must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(ExactSeries, ExactSeries)> = (0..trials)
        .map(|_| {
            let g = random_polynomial(&mut rng, max_deg, false);
            let f = random_polynomial(&mut rng, max_deg, h0_only);
            (g, f)
        })
        .collect();
    let outcomes = pairs
        .into_par_iter()
        .enumerate()
        .map(|(trial, (g, f))| -> Result<Option<Witness>, WordError> {
            let (sg, sf) = (ScaledPoly::from_exact(&g), ScaledPoly::from_exact(&f));
            let lhs = apply_scaled(a, &sg, &sf);
            let rhs = apply_scaled(b, &sg, &sf);
            Ok((!lhs.same_as(&rhs)).then(|| Witness {
                trial,
                g,
                f,
                lhs: lhs.to_exact(),
                rhs: rhs.to_exact(),
            }))
        })
        .collect::<Vec<_>>();
    for o in outcomes {
        if let Some(w) = o? {
            return Ok(Verdict::Unequal(Box::new(w)));
        }
    }
    Ok(Verdict::Equal { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordalg::parse_expr;

    fn e(s: &str) -> OperatorExpr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn commutation_rule_holds() {
        let v = verify_identity(&e("T S"), &e("S T - T^2"), 10, 6, true, 1).unwrap();
        assert!(v.is_equal());
    }

    #[test]
    fn s_and_t_do_not_commute() {
        match verify_identity(&e("T S"), &e("S T"), 5, 4, true, 3).unwrap() {
            Verdict::Unequal(w) => assert_ne!(w.lhs, w.rhs),
            Verdict::Equal { .. } => panic!("expected a witness"),
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(verify_identity(&e("T"), &e("T"), 0, 3, true, 0).is_err());
        assert!(verify_identity(&e("T"), &e("T"), 3, 0, true, 0).is_err());
    }

    #[test]
    fn same_seed_same_draws() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(random_polynomial(&mut a, 8, true), random_polynomial(&mut b, 8, true));
    }
}
