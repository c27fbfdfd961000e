//! Term grammar for polynomial text.
//!
//! ```text
//! expr  := sign? term (('+' | '-') term)*
//! term  := coeff | coeff '*'? var ('/' uint)? | var ('/' uint)?
//! var   := 'x' ('^' uint)?
//! coeff := uint | uint '/' uint
//! ```
//!
//! Whitespace between tokens is ignored. Rational coefficients are only
//! accepted by [`parse_rational_terms`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{SparsePolynomial, MAX_EXPONENT};
use crate::{Error, Result};

/// A term with a rational coefficient, before denominators are cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTerm {
    pub exp: u64,
    pub coeff: BigRational,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn uint(&mut self) -> Result<Option<BigInt>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("invalid utf-8"))?;
        Ok(Some(text.parse().map_err(|_| self.err("bad integer"))?))
    }

    fn term(&mut self) -> Result<(u64, BigInt, BigInt)> {
        let start = self.pos;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut has_coeff = false;
        if let Some(v) = self.uint()? {
            num = v;
            has_coeff = true;
            if self.eat(b'/') {
                den = self.uint()?.ok_or_else(|| self.err("expected denominator"))?;
            }
        }
        let star = has_coeff && self.eat(b'*');
        if self.eat(b'x') {
            let exp = if self.eat(b'^') {
                let e = self.uint()?.ok_or_else(|| self.err("expected exponent"))?;
                u64::try_from(&e).ok().filter(|&e| e <= MAX_EXPONENT).ok_or(Error::ExponentTooLarge)?
            } else {
                1
            };
            if !self.eat(b'/') {
                return Ok((exp, num, den));
            }
            if has_coeff && den != BigInt::one() {
                return Err(self.err("denominator given twice"));
            }
            den = self.uint()?.ok_or_else(|| self.err("expected denominator"))?;
            return Ok((exp, num, den));
        }
        if star {
            return Err(self.err("expected 'x' after '*'"));
        }
        if !has_coeff {
            return Err(Error::Parse { pos: start, msg: "expected a term".to_string() });
        }
        Ok((0, num, den))
    }

    fn expr(&mut self) -> Result<Vec<(u64, BigInt, BigInt)>> {
        let mut out = Vec::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (e, n, d) = self.term()?;
            out.push((e, if neg { -n } else { n }, d));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
    }
}

fn lex(s: &str) -> Result<Vec<(u64, BigInt, BigInt)>> {
    let mut lx = Lexer { src: s.as_bytes(), pos: 0 };
    if lx.peek().is_none() {
        return Err(lx.err("empty input"));
    }
    lx.expr()
}

pub(crate) fn parse_integer(s: &str) -> Result<SparsePolynomial> {
    let raw = lex(s)?;
    let mut pairs = Vec::with_capacity(raw.len());
    for (e, n, d) in raw {
        if !d.is_one() {
            return Err(Error::Parse { pos: 0, msg: String::from("rational coefficient in integer polynomial") });
        }
        pairs.push((e, n));
    }
    SparsePolynomial::from_terms(pairs)
}

/// Parses text whose coefficients may be fractions `a/b`.
pub fn parse_rational_terms(s: &str) -> Result<Vec<RationalTerm>> {
    let mut out = Vec::new();
    for (exp, n, d) in lex(s)? {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        out.push(RationalTerm { exp, coeff: BigRational::new(n, d) });
    }
    Ok(out)
}

/// Multiplies by the product of all (reduced) denominators and divides out
/// the content, giving a primitive integer polynomial with the same roots.
pub fn clear_denominators(terms: &[RationalTerm]) -> Result<SparsePolynomial> {
    let mut prod = BigInt::one();
    for t in terms {
        if t.coeff.denom().is_zero() {
            return Err(Error::ZeroDenominator);
        }
        prod *= t.coeff.denom();
    }
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        let (q, r) = (t.coeff.numer() * &prod).div_rem(t.coeff.denom());
        debug_assert!(r.is_zero());
        pairs.push((t.exp, q));
    }
    let p = SparsePolynomial::from_terms(pairs)?;
    let g = p.terms().iter().fold(BigInt::zero(), |g, t| g.gcd(&t.coeff));
    if g.is_zero() || g.is_one() {
        return Ok(p);
    }
    SparsePolynomial::from_terms(p.terms().iter().map(|t| (t.exp, &t.coeff / &g)))
}
