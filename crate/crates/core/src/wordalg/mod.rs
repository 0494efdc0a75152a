//! Operator words in the letters `M`, `S`, `T` and their exact rewriting.
//!
//! An [`OperatorExpr`] is a finite rational combination of words, each
//! optionally followed by `Pi0` (composition on the right with
//! `f -> f - f(0)`). Everything here is exact; coefficients are
//! [`BigRational`].

mod parse;
mod rewrite;
mod scaled;
mod verify;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_expr, ParseError, ParseErrorKind};
pub use rewrite::{iterated_commutator, reduce_h0, st_form_full, st_form_h0, STForm, STLeading, STTailTerm};
pub use verify::{random_polynomial, verify_identity, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    M,
    S,
    T,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::M, Letter::S, Letter::T];

    pub fn symbol(self) -> char {
        match self {
            Letter::M => 'M',
            Letter::S => 'S',
            Letter::T => 'T',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Composition of letters; `letters[0]` is applied last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
    counts: (usize, usize, usize),
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        let mut counts = (0, 0, 0);
        for l in &letters {
            match l {
                Letter::M => counts.0 += 1,
                Letter::S => counts.1 += 1,
                Letter::T => counts.2 += 1,
            }
        }
        Self { letters, counts }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// `S^a T^b`
    pub fn st(a: usize, b: usize) -> Self {
        let mut letters = vec![Letter::S; a];
        letters.extend(std::iter::repeat_n(Letter::T, b));
        Self::new(letters)
    }

    pub fn power(letter: Letter, k: usize) -> Self {
        Self::new(vec![letter; k])
    }

    /// Parses a bare word such as `"S T T"` or `"STT"` or `"S T^2"`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let spaced: String = if text.chars().all(|c| matches!(c, 'M' | 'S' | 'T')) {
            text.chars().flat_map(|c| [c, ' ']).collect()
        } else {
            text.to_string()
        };
        let e = parse_expr(&spaced)?;
        match e.single_word() {
            Some(w) => Ok(w),
            None => Err(ParseError {
                offset: 0,
                kind: ParseErrorKind::NotAWord,
            }),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(l, m, n)`: the number of `M`, `S` and `T` letters.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.counts
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// Every word of exactly `len` letters over `alphabet`, in lexicographic order.
    pub fn enumerate(alphabet: &[Letter], len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w: Vec<Letter>| {
                    alphabet.iter().map(move |&l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Word::new).collect()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match j - i {
                1 => write!(f, "{l}")?,
                k => write!(f, "{l}^{k}")?,
            }
            i = j;
        }
        Ok(())
    }
}

/// A word together with the trailing `Pi0` flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub pi0: bool,
    pub word: Word,
}

impl Term {
    pub fn new(word: Word, pi0: bool) -> Self {
        Self { pi0, word }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.word.is_empty(), self.pi0) {
            (true, true) => write!(f, "Pi0"),
            (true, false) => write!(f, "1"),
            (false, true) => write!(f, "{} Pi0", self.word),
            (false, false) => write!(f, "{}", self.word),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word {0:?} has no S or T letter; the rewriting does not apply to pure M words")]
    AllM(String),
    #[error("the empty word has no ST-form")]
    EmptyWord,
    #[error("Pi0 directly left of M is not representable as a word combination")]
    Pi0BeforeM,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer coefficient does not fit in i64")]
    Overflow,
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

/// Exact linear combination of [`Term`]s.
///
/// Zero coefficients are never stored. Iteration order is the canonical
/// order: unflagged terms first, then by word length, then lexicographic
/// with `M < S < T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Term, BigRational>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn pi0() -> Self {
        Self::from_term(Term::new(Word::identity(), true), BigRational::one())
    }

    pub fn from_word(word: Word) -> Self {
        Self::from_term(Term::new(word, false), BigRational::one())
    }

    pub fn from_term(term: Term, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(term, coeff);
        e
    }

    /// `sum c_ab S^a T^b` from a map keyed by `(a, b)`.
    pub fn from_st_map(map: &BTreeMap<(usize, usize), BigInt>, pi0: bool) -> Self {
        let mut e = Self::zero();
        for (&(a, b), c) in map {
            e.add_term(Term::new(Word::st(a, b), pi0), BigRational::from_integer(c.clone()));
        }
        e
    }

    pub fn add_term(&mut self, term: Term, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(term.clone()).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&term);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, term: &Term) -> BigRational {
        self.terms.get(term).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff_of_word(&self, word: &Word) -> BigRational {
        self.coeff(&Term::new(word.clone(), false))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The word when the expression is exactly `1 * word` without `Pi0`.
    pub fn single_word(&self) -> Option<Word> {
        if self.terms.len() != 1 {
            return None;
        }
        let (t, c) = self.terms.iter().next()?;
        (c.is_one() && !t.pi0).then(|| t.word.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (t, v) in &self.terms {
            out.add_term(t.clone(), v * c);
        }
        out
    }

    /// Operator product `self * other` (apply `other` first).
    ///
    /// `Pi0` left of `S` or `T` disappears because both map into functions
    /// vanishing at 0; `Pi0 Pi0 = Pi0`; `Pi0` left of `M` is an error.
    pub fn compose(&self, other: &Self) -> Result<Self, WordError> {
        let mut out = Self::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                let term = compose_terms(ta, tb)?;
                out.add_term(term, ca * cb);
            }
        }
        Ok(out)
    }

    /// Largest number of letters over all terms.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

pub(crate) fn compose_terms(a: &Term, b: &Term) -> Result<Term, WordError> {
    if a.pi0 {
        match b.word.letters().first() {
            Some(Letter::M) => return Err(WordError::Pi0BeforeM),
            Some(_) => {}
            None => return Ok(Term::new(a.word.clone(), true)),
        }
    }
    Ok(Term::new(a.word.concat(&b.word), b.pi0))
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let bare = t.word.is_empty() && !t.pi0;
            if bare {
                write!(f, "{}", fmt_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{} {t}", fmt_coeff(&mag))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for OperatorExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_letters() {
        let w = Word::parse("M S T T").unwrap();
        assert_eq!(w.counts(), (1, 1, 2));
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn canonical_order() {
        let e = parse_expr("T Pi0 + T^2 + S + 3").unwrap();
        assert_eq!(e.to_string(), "3 + S + T^2 + T Pi0");
    }

    #[test]
    fn compose_absorbs_pi0() {
        let a = parse_expr("S Pi0").unwrap();
        let b = parse_expr("T").unwrap();
        assert_eq!(a.compose(&b).unwrap(), parse_expr("S T").unwrap());
        let p = OperatorExpr::pi0();
        assert_eq!(p.compose(&p).unwrap(), p);
        assert_eq!(a.compose(&parse_expr("M").unwrap()), Err(WordError::Pi0BeforeM));
    }

    #[test]
    fn enumerate_sizes() {
        assert_eq!(Word::enumerate(&Letter::ALL, 3).len(), 27);
        assert_eq!(Word::enumerate(&[Letter::S, Letter::T], 0), vec![Word::identity()]);
    }
}
