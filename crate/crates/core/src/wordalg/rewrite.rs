use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{Letter, OperatorExpr, Term, Word, WordError};

type StMap = BTreeMap<(usize, usize), BigInt>;

fn accumulate<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn st_shape(w: &[Letter]) -> Option<(usize, usize)> {
    let a = w.iter().take_while(|&&l| l == Letter::S).count();
    w[a..].iter().all(|&l| l == Letter::T).then(|| (a, w.len() - a))
}

/// Rewrites a word over `{S, T}` into `sum c S^a T^b`, valid on functions
/// vanishing at 0.
///
/// The rightmost block `T^n S` is replaced by `S T^n - n T^{n+1}` until no
/// `T` stands left of an `S`.
fn normalize_st(word: &[Letter]) -> StMap {
    let mut pending: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::new();
    pending.insert(word.to_vec(), BigInt::one());
    let mut out = StMap::new();
    while let Some((w, c)) = pending.pop_last() {
        let Some(i) = (0..w.len().saturating_sub(1))
            .rev()
            .find(|&i| w[i] == Letter::T && w[i + 1] == Letter::S)
        else {
            let shape = st_shape(&w).expect("no T left of an S");
            accumulate(&mut out, shape, c);
            continue;
        };
        let j = (0..=i).rev().take_while(|&k| w[k] == Letter::T).last().unwrap_or(i);
        let n = i - j + 1;
        let head = &w[..j];
        let rest = &w[i + 2..];

        let mut commuted = head.to_vec();
        commuted.push(Letter::S);
        commuted.extend(std::iter::repeat_n(Letter::T, n));
        commuted.extend_from_slice(rest);
        accumulate(&mut pending, commuted, c.clone());

        let mut longer = head.to_vec();
        longer.extend(std::iter::repeat_n(Letter::T, n + 1));
        longer.extend_from_slice(rest);
        accumulate(&mut pending, longer, -c * BigInt::from(n));
    }
    out
}

/// Normal form on functions vanishing at 0 for any word, including pure `M`
/// words and the empty word. Each `M` is replaced by `S + T`.
fn normalize_h0(word: &[Letter]) -> StMap {
    let mut expanded: Vec<Vec<Letter>> = vec![Vec::with_capacity(word.len())];
    for &l in word {
        expanded = match l {
            Letter::M => expanded
                .into_iter()
                .flat_map(|w| {
                    let mut s = w.clone();
                    s.push(Letter::S);
                    let mut t = w;
                    t.push(Letter::T);
                    [s, t]
                })
                .collect(),
            other => {
                for w in expanded.iter_mut() {
                    w.push(other);
                }
                expanded
            }
        };
    }
    let mut out = StMap::new();
    for w in expanded {
        for (k, c) in normalize_st(&w) {
            accumulate(&mut out, k, c);
        }
    }
    out
}

/// ST-form of `w` as an operator on functions vanishing at 0.
///
/// The result is `S^(l+m) T^n + sum c_j S^(l+m-j) T^(n+j)` with integer
/// coefficients independent of the symbol.
pub fn st_form_h0(w: &Word) -> Result<OperatorExpr, WordError> {
    let (_, m, n) = w.counts();
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if m + n == 0 {
        return Err(WordError::AllM(w.to_string()));
    }
    Ok(OperatorExpr::from_st_map(&normalize_h0(w.letters()), false))
}

/// Canonical form of an expression restricted to functions vanishing at 0.
///
/// `Pi0` flags are dropped and every word, pure `M` words included, is
/// brought to `S^a T^b` form.
pub fn reduce_h0(e: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (term, coeff) in e.terms() {
        for ((a, b), c) in normalize_h0(term.word.letters()) {
            out.add_term(Term::new(Word::st(a, b), false), coeff * BigRational::from_integer(c));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct STLeading {
    pub k: usize,
    pub n: usize,
    pub with_pi0: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct STTailTerm {
    pub j: usize,
    pub coeff: i64,
    pub with_pi0: bool,
}

/// `L = S^k T^n [Pi0] + sum_j c_j S^(k-j) T^(n+j) [Pi0]`, valid on all
/// analytic functions. The leading term carries `Pi0` exactly when
/// `delta_l == 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct STForm {
    pub leading: STLeading,
    pub tail: Vec<STTailTerm>,
    pub delta_l: u8,
}

impl STForm {
    pub fn to_expr(&self) -> OperatorExpr {
        let k = self.leading.k;
        let n = self.leading.n;
        let mut e = OperatorExpr::from_term(Term::new(Word::st(k, n), self.leading.with_pi0), BigRational::one());
        for t in &self.tail {
            e.add_term(
                Term::new(Word::st(k - t.j, n + t.j), t.with_pi0),
                BigRational::from_integer(t.coeff.into()),
            );
        }
        e
    }

    fn from_expr(e: &OperatorExpr, k: usize, n: usize, delta_l: u8) -> Result<Self, WordError> {
        let leading = STLeading {
            k,
            n,
            with_pi0: delta_l == 1,
        };
        let mut tail = Vec::new();
        let mut saw_leading = false;
        for (term, c) in e.terms() {
            let (l, a, b) = term.word.counts();
            debug_assert!(l == 0 && a + b == k + n && a <= k, "term {term} outside the ST shape");
            let coeff = c.to_integer().to_i64().ok_or(WordError::Overflow)?;
            debug_assert!(c.is_integer());
            if a == k && term.pi0 == leading.with_pi0 {
                debug_assert_eq!(coeff, 1, "leading coefficient");
                saw_leading = true;
                continue;
            }
            tail.push(STTailTerm {
                j: k - a,
                coeff,
                with_pi0: term.pi0,
            });
        }
        debug_assert!(saw_leading);
        tail.sort_by_key(|t| (t.j, t.with_pi0));
        Ok(Self { leading, tail, delta_l })
    }
}

impl fmt::Display for STForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  [delta_L = {}]", self.to_expr(), self.delta_l)
    }
}

/// ST-form of `w` valid on all analytic functions.
///
/// Writing `w = P X M^i` with `X` the last non-`M` letter, the end block is
/// rewritten first (`T M^i = S^i T`, `S M^i = i S^i T + S^(i+1)`), after which
/// everything left of it acts on functions vanishing at 0.
pub fn st_form_full(w: &Word) -> Result<STForm, WordError> {
    let (l, m, n) = w.counts();
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if m + n == 0 {
        return Err(WordError::AllM(w.to_string()));
    }
    if l + m == 0 {
        return Ok(STForm {
            leading: STLeading {
                k: 0,
                n,
                with_pi0: false,
            },
            tail: Vec::new(),
            delta_l: 0,
        });
    }
    let letters = w.letters();
    let p = letters.iter().rposition(|&x| x != Letter::M).expect("has S or T");
    let i = letters.len() - 1 - p;
    let with_s = |extra: usize| {
        let mut v = letters[..p].to_vec();
        v.extend(std::iter::repeat_n(Letter::S, extra));
        v
    };
    let mut e = OperatorExpr::zero();
    let mut push = |map: StMap, scale: BigInt, extra_t: usize, pi0: bool| {
        for ((a, b), c) in map {
            e.add_term(
                Term::new(Word::st(a, b + extra_t), pi0),
                BigRational::from_integer(c * &scale),
            );
        }
    };
    let delta_l = match letters[p] {
        Letter::T => {
            push(normalize_h0(&with_s(i)), BigInt::one(), 1, false);
            0
        }
        Letter::S => {
            push(normalize_h0(&with_s(i)), BigInt::from(i), 1, false);
            push(normalize_h0(&with_s(i + 1)), BigInt::one(), 0, true);
            1
        }
        Letter::M => unreachable!(),
    };
    STForm::from_expr(&e, l + m, n, delta_l)
}

/// `[a, b]_1 = ab - ba`, `[a, b]_(k+1) = [[a, b]_k, b]`, expanded in the free
/// algebra.
pub fn iterated_commutator(a: &OperatorExpr, b: &OperatorExpr, k: usize) -> Result<OperatorExpr, WordError> {
    if k == 0 {
        return Err(WordError::InvalidArgument("commutator depth must be at least 1".into()));
    }
    let mut acc = a.clone();
    for _ in 0..k {
        acc = acc.compose(b)?.sub(&b.compose(&acc)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordalg::parse_expr;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn e(s: &str) -> OperatorExpr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn commutation_rule_n1() {
        assert_eq!(st_form_h0(&w("T S")).unwrap(), e("S T - T^2"));
    }

    #[test]
    fn t_s_s() {
        assert_eq!(st_form_h0(&w("T S S")).unwrap(), e("S^2 T - 2 S T^2 + 2 T^3"));
    }

    #[test]
    fn canonical_word_is_fixed() {
        assert_eq!(st_form_h0(&w("S T T")).unwrap(), e("S T^2"));
    }

    #[test]
    fn all_m_and_empty_rejected() {
        assert!(matches!(st_form_h0(&w("M M")), Err(WordError::AllM(_))));
        assert_eq!(st_form_h0(&Word::identity()), Err(WordError::EmptyWord));
        assert!(matches!(st_form_full(&w("M")), Err(WordError::AllM(_))));
        assert_eq!(st_form_full(&Word::identity()), Err(WordError::EmptyWord));
    }

    #[test]
    fn end_block_rules() {
        let f = st_form_full(&w("T M")).unwrap();
        assert_eq!((f.to_expr(), f.delta_l), (e("S T"), 0));
        let f = st_form_full(&w("S M")).unwrap();
        assert_eq!((f.to_expr(), f.delta_l), (e("S T + S^2 Pi0"), 1));
        let f = st_form_full(&w("M T")).unwrap();
        assert_eq!((f.to_expr(), f.delta_l), (e("S T + T^2"), 0));
        assert_eq!(
            f.tail,
            vec![STTailTerm {
                j: 1,
                coeff: 1,
                with_pi0: false
            }]
        );
    }

    #[test]
    fn pure_t_is_itself() {
        let f = st_form_full(&w("T T T")).unwrap();
        assert_eq!(f.to_expr(), e("T^3"));
        assert!(f.tail.is_empty());
    }

    #[test]
    fn commutators() {
        let t = e("T");
        let c = iterated_commutator(&e("S T^2"), &t, 1).unwrap();
        assert_eq!(reduce_h0(&c), e("T^4"));
        let c = iterated_commutator(&e("S^2 T"), &t, 2).unwrap();
        assert_eq!(reduce_h0(&c), e("2 T^5"));
        assert!(iterated_commutator(&t, &t, 1).unwrap().is_zero());
        assert!(iterated_commutator(&t, &t, 0).is_err());
    }

    #[test]
    fn leading_coefficient_is_one() {
        for len in 1..=6 {
            for word in Word::enumerate(&Letter::ALL, len) {
                let (l, m, n) = word.counts();
                if n == 0 {
                    continue;
                }
                let nf = st_form_h0(&word).unwrap();
                assert!(nf.has_integer_coeffs());
                assert_eq!(nf.coeff_of_word(&Word::st(l + m, n)), BigRational::one(), "{word}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let word = w("S M T M S");
        assert_eq!(st_form_full(&word).unwrap(), st_form_full(&word).unwrap());
    }
}
