//! Sparse integer polynomials and the derivative chain.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::{Dyadic, Sign};
use crate::{Error, Result};

/// Largest accepted exponent, `2^62 - 1`.
pub const MAX_EXPONENT: u64 = (1 << 62) - 1;

/// One nonzero monomial `coeff * x^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: u64,
    pub coeff: BigInt,
}

/// Size parameters of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Magnitude {
    /// Degree `n`.
    pub degree: u64,
    /// Smallest `tau >= 1` with every `|a_i| <= 2^tau`.
    pub coeff_bits: u64,
    /// Number of nonzero terms `k`.
    pub terms: usize,
}

/// Polynomial with integer coefficients stored as its nonzero terms,
/// sorted by strictly increasing exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    terms: Vec<Term>,
}

/// `ceil(log2(v))` for `v >= 1`.
pub(crate) fn ceil_log2(v: u64) -> u64 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros() as u64
    }
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        SparsePolynomial { terms: Vec::new() }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs.
    /// Duplicate exponents are summed and zero coefficients dropped.
    pub fn from_terms<I, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, C)>,
        C: Into<BigInt>,
    {
        let mut terms: Vec<Term> = Vec::new();
        for (exp, c) in pairs {
            if exp > MAX_EXPONENT {
                return Err(Error::ExponentTooLarge);
            }
            terms.push(Term { exp, coeff: c.into() });
        }
        Ok(Self::normalized(terms))
    }

    fn normalized(mut terms: Vec<Term>) -> Self {
        terms.sort_by_key(|t| t.exp);
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        SparsePolynomial { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree; zero for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.exp)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.coeff)
    }

    /// Coefficient of `x^0`, zero if absent.
    pub fn constant_term(&self) -> BigInt {
        match self.terms.first() {
            Some(t) if t.exp == 0 => t.coeff.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn magnitude(&self) -> Magnitude {
        let max = self.terms.iter().map(|t| t.coeff.abs()).max().unwrap_or_else(BigInt::zero);
        Magnitude { degree: self.degree(), coeff_bits: coeff_bits(&max), terms: self.terms.len() }
    }

    /// Splits off the largest power of `x`: `self = x^i0 * q` with `q(0) != 0`.
    pub fn strip_power(&self) -> Result<(SparsePolynomial, u64)> {
        let i0 = self.terms.first().ok_or(Error::ZeroPolynomial)?.exp;
        let terms = self.terms.iter().map(|t| Term { exp: t.exp - i0, coeff: t.coeff.clone() }).collect();
        Ok((SparsePolynomial { terms }, i0))
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { exp: t.exp, coeff: if t.exp % 2 == 1 { -&t.coeff } else { t.coeff.clone() } })
            .collect();
        SparsePolynomial { terms }
    }

    /// Ordinary derivative.
    pub fn derivative(&self) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exp > 0)
            .map(|t| Term { exp: t.exp - 1, coeff: &t.coeff * BigInt::from(t.exp) })
            .collect();
        SparsePolynomial { terms }
    }

    /// `x^(1-g) * q'(x)` where `g` is the smallest positive exponent of `q`.
    ///
    /// Requires a nonzero constant term; the result has one term fewer and a
    /// nonzero constant term again.
    pub fn next_in_chain(&self) -> Result<SparsePolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.terms[0].exp != 0 {
            return Err(Error::MissingConstantTerm);
        }
        if self.terms.len() == 1 {
            return Err(Error::ConstantPolynomial);
        }
        let g = self.terms[1].exp;
        let terms = self.terms[1..]
            .iter()
            .map(|t| Term { exp: t.exp - g, coeff: &t.coeff * BigInt::from(t.exp) })
            .collect();
        Ok(SparsePolynomial { terms })
    }

    /// `[p_0, ..., p_{k-1}]` with `p_0 = self` and `p_{k-1}` constant.
    pub fn derivative_chain(&self) -> Result<Vec<SparsePolynomial>> {
        let mut chain = Vec::with_capacity(self.terms.len());
        chain.push(self.clone());
        while chain.last().unwrap().num_terms() > 1 {
            let next = chain.last().unwrap().next_in_chain()?;
            chain.push(next);
        }
        Ok(chain)
    }

    /// `e` such that every real root has absolute value `< 2^e`.
    ///
    /// With `|a_i| <= 2^tau`, Cauchy's bound gives `1 + 2^tau < 2^(tau+1)`.
    pub fn cauchy_exponent(&self) -> u64 {
        self.magnitude().coeff_bits + 1
    }

    /// Number of sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        self.terms.windows(2).filter(|w| w[0].coeff.is_negative() != w[1].coeff.is_negative()).count()
    }

    /// Exact value at a dyadic point.
    pub fn eval_exact(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        let mut pw = Dyadic::one();
        let mut at = 0u64;
        for t in &self.terms {
            pw = &pw * &x.pow(t.exp - at);
            at = t.exp;
            acc = &acc + &(&pw * &Dyadic::from(t.coeff.clone()));
        }
        acc
    }

    /// Exact sign at a dyadic point.
    pub fn sign_exact(&self, x: &Dyadic) -> Sign {
        self.eval_exact(x).sign()
    }

    /// Product, used to check factorisations.
    pub fn mul(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term { exp: a.exp + b.exp, coeff: &a.coeff * &b.coeff });
            }
        }
        Self::normalized(terms)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> SparsePolynomial {
        Self::normalized(self.terms.iter().map(|t| Term { exp: t.exp, coeff: &t.coeff * c }).collect())
    }
}

/// `max(1, ceil(log2 |m|))`.
pub(crate) fn coeff_bits(m: &BigInt) -> u64 {
    if m.is_zero() || m.abs().is_one() {
        return 1;
    }
    let a = m.abs();
    let b = a.bits();
    let pow2 = a.trailing_zeros() == Some(b - 1);
    (if pow2 { b - 1 } else { b }).max(1)
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            let neg = t.coeff.is_negative();
            let mag = t.coeff.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one() && t.exp > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match t.exp {
                0 => {}
                1 => f.write_str(if unit { "x" } else { "*x" })?,
                e => write!(f, "{}x^{e}", if unit { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

impl FromStr for SparsePolynomial {
    type Err = Error;

    /// Parses the term grammar, e.g. `"x^50 - 4x^48 + 4*x^46 - x^4 + 4x^2 - 4"`.
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_integer(s)
    }
}

/// Human-readable summary used in diagnostics.
pub fn describe(p: &SparsePolynomial) -> String {
    let m = p.magnitude();
    alloc::format!("n={} k={} tau={}", m.degree, m.terms, m.coeff_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn golden_chain() {
        let p0 = p("x^50 - 4x^48 + 4x^46 - x^4 + 4x^2 - 4");
        let chain = p0.derivative_chain().unwrap();
        let expected = [
            "x^50 - 4*x^48 + 4*x^46 - x^4 + 4*x^2 - 4",
            "50*x^48 - 192*x^46 + 184*x^44 - 4*x^2 + 8",
            "2400*x^46 - 8832*x^44 + 8096*x^42 - 8",
            "110400*x^4 - 388608*x^2 + 340032",
            "441600*x^2 - 777216",
            "883200",
        ];
        assert_eq!(chain.len(), 6);
        for (c, e) in chain.iter().zip(expected) {
            assert_eq!(c.to_string(), e);
            assert_eq!(*c, p(e));
        }
    }

    #[test]
    fn chain_examples() {
        assert_eq!(p("x^2 - 2").next_in_chain().unwrap(), p("2"));
        assert_eq!(p("3*x^5 + 2*x^2 + 1").next_in_chain().unwrap(), p("15*x^3 + 4"));
        assert_eq!(p("x^2").next_in_chain(), Err(Error::MissingConstantTerm));
        assert_eq!(p("7").next_in_chain(), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn basic_operations() {
        let q = p("x^7 - 3x^5 + 2x^3");
        let (r, i0) = q.strip_power().unwrap();
        assert_eq!((r, i0), (p("x^4 - 3x^2 + 2"), 3));
        assert_eq!(p("x^3 - 2x + 5").reflect(), p("-x^3 + 2x + 5"));
        assert_eq!(p("x^2 + 2x + 2x + x^2").to_string(), "2*x^2 + 4*x");
        assert_eq!(p("x^2 - 1").sign_variations(), 1);
        assert_eq!(p("x^50 - 4x^48 + 4x^46 - x^4 + 4x^2 - 4").sign_variations(), 5);
        assert_eq!(p("x - 1").cauchy_exponent(), 2);
        assert_eq!(p("x^50 - 4x^48 + 4x^46 - x^4 + 4x^2 - 4").cauchy_exponent(), 3);
        let m = p("x^50 - 4x^48 + 4x^46 - x^4 + 4x^2 - 4").magnitude();
        assert_eq!((m.degree, m.coeff_bits, m.terms), (50, 2, 6));
        let x: Dyadic = "3*2^-1".parse().unwrap();
        assert_eq!(p("4x^2 - 9").eval_exact(&x), Dyadic::zero());
        assert_eq!(p("x^3 + 1").eval_exact(&x).to_string(), "35*2^-3");
    }

    #[test]
    fn factorisation_of_golden() {
        let a = p("x^2 - 2");
        let f = a.mul(&a).mul(&p("x^46 - 1"));
        assert_eq!(f, p("x^50 - 4x^48 + 4x^46 - x^4 + 4x^2 - 4"));
    }

    #[test]
    fn coefficient_bits() {
        for (v, b) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (-9, 4), (0, 1)] {
            assert_eq!(coeff_bits(&BigInt::from(v)), b, "{v}");
        }
    }
}
