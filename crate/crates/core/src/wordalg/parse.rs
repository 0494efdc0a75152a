//! Text syntax for operator expressions.
//!
//! ```text
//! expr     := [sign] term (('+' | '-') term)*
//! term     := rational factor* | factor+
//! factor   := ('M' | 'S' | 'T' | 'Pi0') ['^' nonneg-int]
//! rational := int ['/' positive-int]
//! ```
//!
//! Juxtaposition is composition with the leftmost factor outermost. A term
//! that is only a rational denotes a multiple of the identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{Letter, OperatorExpr, Term, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("Pi0 directly left of M is not representable")]
    Pi0BeforeM,
    #[error("expected a single word")]
    NotAWord,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Slash,
    Caret,
    Plus,
    Minus,
    Letter(Letter),
    Pi0,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Letter(l) => format!("letter {l}"),
            Tok::Pi0 => "Pi0".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'M' => Tok::Letter(Letter::M),
            b'S' => Tok::Letter(Letter::S),
            b'T' => Tok::Letter(Letter::T),
            b'P' if text[i..].starts_with("Pi0") => {
                i += 3;
                out.push((start, Tok::Pi0));
                continue;
            }
            _ => {
                let end = text[i..]
                    .char_indices()
                    .find(|&(k, c)| k > 0 && (c.is_whitespace() || "+-^/".contains(c)))
                    .map_or(text.len(), |(k, _)| i + k);
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownToken(text[start..end].to_string()),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::Unexpected(t.describe())),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut out = OperatorExpr::zero();
        let mut sign = BigRational::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                sign = -sign;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (term, coeff) = self.term()?;
            out.add_term(term, coeff * &sign);
            match self.peek() {
                None => return Ok(out),
                Some(Tok::Plus) => sign = BigRational::one(),
                Some(Tok::Minus) => sign = -BigRational::one(),
                Some(_) => return Err(self.unexpected()),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<(Term, BigRational), ParseError> {
        let coeff = match self.peek() {
            Some(Tok::Int(_)) => Some(self.rational()?),
            _ => None,
        };
        let mut letters = Vec::new();
        let mut pending_pi0 = false;
        let mut any_factor = false;
        loop {
            let offset = self.offset();
            let item = match self.peek() {
                Some(Tok::Letter(l)) => Some(*l),
                Some(Tok::Pi0) => None,
                _ => break,
            };
            self.bump();
            any_factor = true;
            let exp = self.exponent()?;
            match item {
                Some(l) if exp > 0 => {
                    if pending_pi0 && l == Letter::M {
                        return Err(ParseError {
                            offset,
                            kind: ParseErrorKind::Pi0BeforeM,
                        });
                    }
                    pending_pi0 = false;
                    letters.extend(std::iter::repeat_n(l, exp));
                }
                None if exp > 0 => pending_pi0 = true,
                _ => {}
            }
        }
        if coeff.is_none() && !any_factor {
            return Err(self.unexpected());
        }
        Ok((
            Term::new(Word::new(letters), pending_pi0),
            coeff.unwrap_or_else(BigRational::one),
        ))
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.bump();
        match self.peek() {
            Some(Tok::Minus) => Err(self.err(ParseErrorKind::NegativeExponent)),
            Some(Tok::Int(n)) => {
                let v = n.to_usize().filter(|&v| v <= 4096);
                let e = self.err(ParseErrorKind::ExponentTooLarge);
                self.bump();
                v.ok_or(e)
            }
            _ => Err(self.unexpected()),
        }
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => unreachable!("caller checked for an integer"),
        };
        if self.peek() != Some(&Tok::Slash) {
            return Ok(BigRational::from_integer(num));
        }
        self.bump();
        match self.peek() {
            Some(Tok::Int(d)) if d.is_zero() => Err(self.err(ParseErrorKind::ZeroDenominator)),
            Some(Tok::Int(d)) => {
                let d = d.clone();
                self.bump();
                Ok(BigRational::new(num, d))
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses an operator expression; errors carry the byte offset of the
/// offending token.
pub fn parse_expr(text: &str) -> Result<OperatorExpr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    p.expr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn simple_word() {
        let e = parse_expr("S T T").unwrap();
        assert_eq!(e.single_word(), Some(Word::new(vec![Letter::S, Letter::T, Letter::T])));
    }

    #[test]
    fn linear_combination() {
        let e = parse_expr("2 S T - T^2").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff_of_word(&Word::st(1, 1)), q(2, 1));
        assert_eq!(e.coeff_of_word(&Word::st(0, 2)), q(-1, 1));
    }

    #[test]
    fn pi0_flag() {
        let e = parse_expr("S T Pi0").unwrap();
        assert_eq!(e.coeff(&Term::new(Word::st(1, 1), true)), q(1, 1));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn fractions_and_signs() {
        let e = parse_expr("-1/3 S^2 T + 5/10").unwrap();
        assert_eq!(e.coeff_of_word(&Word::st(2, 1)), q(-1, 3));
        assert_eq!(e.coeff_of_word(&Word::identity()), q(1, 2));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_expr("S X T").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(matches!(e.kind, ParseErrorKind::UnknownToken(ref s) if s == "X"));
        let e = parse_expr("T^-1").unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::NegativeExponent));
        let e = parse_expr("1/0 S").unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::ZeroDenominator));
        let e = parse_expr("S +").unwrap_err();
        assert_eq!((e.offset, e.kind), (3, ParseErrorKind::UnexpectedEnd));
        let e = parse_expr("Pi0 M").unwrap_err();
        assert_eq!((e.offset, e.kind), (4, ParseErrorKind::Pi0BeforeM));
    }

    #[test]
    fn zero_exponent_is_identity() {
        assert_eq!(parse_expr("S^0 T").unwrap(), parse_expr("T").unwrap());
    }

    #[test]
    fn cancellation_drops_terms() {
        assert!(parse_expr("S T - S T").unwrap().is_zero());
        assert_eq!(parse_expr("0").unwrap().to_string(), "0");
    }
}
