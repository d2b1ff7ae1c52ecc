//! Text format for forms.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := [sign] [coeff ['*']] factor ('*' factor)*  |  [sign] coeff
//! coeff  := integer ['/' integer]
//! factor := 'x' index ['^' positive-integer]
//! ```
//!
//! Whitespace is ignored, there are no parentheses, and every term must have the
//! same total degree. A bare coefficient term is a degree-0 form. The printer
//! emits graded-lex order with an explicit `*` between factors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{monomial_at, HomogeneousPoly, PolyError};
use crate::linalg::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("terms of different degree: `{first}` and `{second}`")]
    DegreeMismatch { first: String, second: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// A parse failure with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} (at position {position})")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

struct Term {
    text: String,
    coeff: BigRational,
    exponents: Vec<u32>,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
    num_vars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, num_vars: usize) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Self { chars, pos: 0, src, num_vars }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.chars().count(), |(byte, _)| self.src[..*byte].chars().count())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.offset() }
    }

    fn malformed(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("unexpected `{c}`, {what}"),
            None => format!("unexpected end of input, {what}"),
        };
        self.err(ParseErrorKind::Malformed(found))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn term(&mut self, first: bool) -> Result<Term, ParseError> {
        let start = self.pos;
        let negative = match self.sign() {
            Some(neg) => neg,
            None if first => false,
            None => return Err(self.malformed("expected `+` or `-` between terms")),
        };
        let mut coeff = BigRational::one();
        let mut has_coeff = false;
        if let Some(num) = self.digits() {
            has_coeff = true;
            let num: BigInt = num.parse().expect("ascii digits");
            let mut den = BigInt::one();
            if self.peek() == Some('/') {
                self.pos += 1;
                let d = self.digits().ok_or_else(|| self.malformed("expected a denominator"))?;
                den = d.parse().expect("ascii digits");
                if den.is_zero() {
                    self.pos -= 1;
                    return Err(self.err(ParseErrorKind::Malformed("zero denominator".into())));
                }
            }
            coeff = BigRational::new(num, den);
        }
        let mut exponents = vec![0u32; self.num_vars];
        let mut factors = 0;
        if has_coeff && self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut exponents)?;
            factors += 1;
        } else if matches!(self.peek(), Some(c) if c.is_alphabetic()) {
            self.factor(&mut exponents)?;
            factors += 1;
        } else if !has_coeff {
            return Err(self.malformed("expected a coefficient or a variable"));
        }
        while factors > 0 && self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut exponents)?;
        }
        match self.peek() {
            None | Some('+') | Some('-') | Some('\u{2212}') => {}
            Some('(') | Some(')') => {
                return Err(self.err(ParseErrorKind::Malformed("parentheses are not supported".into())))
            }
            Some(_) => return Err(self.malformed("expected `*`, `+` or `-`")),
        }
        if negative {
            coeff = -coeff;
        }
        let text = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(Term { text, coeff, exponents })
    }

    fn factor(&mut self, exponents: &mut [u32]) -> Result<(), ParseError> {
        let at = self.pos;
        match self.peek() {
            Some('x') => self.pos += 1,
            Some('(') => return Err(self.err(ParseErrorKind::Malformed("parentheses are not supported".into()))),
            Some(c) if c.is_alphabetic() => {
                let mut name = String::new();
                while matches!(self.peek(), Some(c) if c.is_alphanumeric()) {
                    name.push(self.peek().unwrap());
                    self.pos += 1;
                }
                self.pos = at;
                return Err(self.err(ParseErrorKind::UnknownVariable(name)));
            }
            _ => return Err(self.malformed("expected a variable")),
        }
        let idx = self.digits().ok_or_else(|| self.malformed("expected a variable index after `x`"))?;
        let index: usize = idx.parse().unwrap_or(usize::MAX);
        if index >= self.num_vars {
            self.pos = at;
            return Err(self.err(ParseErrorKind::UnknownVariable(format!("x{idx}"))));
        }
        let mut power = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            let p = self.digits().ok_or_else(|| self.malformed("expected an exponent"))?;
            power = match p.parse::<u32>() {
                Ok(v) if v > 0 => v,
                _ => {
                    self.pos -= p.chars().count();
                    return Err(
                        self.err(ParseErrorKind::Malformed(format!("exponent `{p}` must be a positive integer")))
                    );
                }
            };
        }
        exponents[index] += power;
        Ok(())
    }
}

/// Parses a homogeneous form in `num_vars` variables over `field`.
pub fn parse_poly(text: &str, num_vars: usize, field: Field) -> Result<HomogeneousPoly, PolyError> {
    if num_vars == 0 {
        return Err(PolyError::NoVariables);
    }
    let mut p = Parser::new(text, num_vars);
    if p.peek().is_none() {
        return Err(p.err(ParseErrorKind::Malformed("empty input".into())).into());
    }
    let mut terms: Vec<Term> = Vec::new();
    while p.peek().is_some() {
        let start = p.offset();
        let t = p.term(terms.is_empty())?;
        if let Some(first) = terms.first() {
            let d0: u32 = first.exponents.iter().sum();
            let d1: u32 = t.exponents.iter().sum();
            if d0 != d1 {
                return Err(ParseError {
                    kind: ParseErrorKind::DegreeMismatch { first: first.text.clone(), second: t.text },
                    position: start,
                }
                .into());
            }
        }
        terms.push(t);
    }
    let degree = terms[0].exponents.iter().sum();
    let mut scalars = Vec::with_capacity(terms.len());
    for t in terms {
        scalars.push((Scalar::from_rational(field, &t.coeff)?, t.exponents));
    }
    HomogeneousPoly::from_terms(num_vars, degree, field, scalars)
}

/// Number of variables implied by the largest `x<i>` index in `text`.
pub fn infer_num_vars(text: &str) -> Option<usize> {
    let chars: Vec<char> = text.chars().collect();
    let mut best: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'x' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 {
                let idx: String = chars[i + 1..j].iter().collect();
                if let Ok(v) = idx.parse::<usize>() {
                    best = Some(best.map_or(v + 1, |b| b.max(v + 1)));
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

fn magnitude(c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Rational(q) => {
            let neg = q.is_negative();
            let a = q.abs();
            let s = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            (neg, s)
        }
        Scalar::Residue { value, .. } => (false, value.to_string()),
    }
}

pub(super) fn write_canonical(p: &HomogeneousPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return if p.degree() == 0 { write!(f, "0") } else { write!(f, "0*x0^{}", p.degree()) };
    }
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let exps = monomial_at(p.num_vars(), p.degree(), i);
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| if e == 1 { format!("x{k}") } else { format!("x{k}^{e}") })
            .collect();
        let (neg, mag) = magnitude(c);
        let body = if factors.is_empty() {
            mag
        } else if mag == "1" {
            factors.join("*")
        } else {
            format!("{mag}*{}", factors.join("*"))
        };
        match (first, neg) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    Ok(())
}
