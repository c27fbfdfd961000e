use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::{Dyadic, Sign};
use crate::parse::RationalTerm;
use crate::poly::SparsePolynomial;
use crate::{Error, Result};

/// Dense polynomial with integer coefficients, lowest degree first, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePolynomial {
    pub coeffs: Vec<BigInt>,
}

/// Expands `p` densely; refuses degrees above `cap`.
pub fn densify(p: &SparsePolynomial, cap: u64) -> Result<DensePolynomial> {
    if p.degree() > cap {
        return Err(Error::DegreeExceedsCap { degree: p.degree(), cap });
    }
    let mut coeffs = vec![BigInt::zero(); p.degree() as usize + 1];
    for t in p.terms() {
        coeffs[t.exp as usize] = t.coeff.clone();
    }
    Ok(DensePolynomial::new(coeffs))
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    /// Positive multiple of a polynomial with rational coefficients.
    pub fn from_rational(terms: &[RationalTerm], cap: u64) -> Result<Self> {
        let mut q: Vec<BigRational> = Vec::new();
        for t in terms {
            if t.exp > cap {
                return Err(Error::DegreeExceedsCap { degree: t.exp, cap });
            }
            if t.coeff.denom().is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let e = t.exp as usize;
            if q.len() <= e {
                q.resize(e + 1, BigRational::zero());
            }
            q[e] += &t.coeff;
        }
        Ok(from_q(&q))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `-1` for zero.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> Self {
        DensePolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// Divides by the positive content.
    pub fn primitive(&self) -> Self {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                return self.clone();
            }
        }
        if g.is_zero() {
            return self.clone();
        }
        DensePolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Sign at `num / 2^s`, by Horner on `2^(s*d) p(num / 2^s)`.
    pub fn sign_at(&self, num: &BigInt, s: u64) -> Sign {
        let d = match self.coeffs.len() {
            0 => return Sign::Zero,
            n => n - 1,
        };
        let mut h = self.coeffs[d].clone();
        for i in (0..d).rev() {
            h = h * num + (&self.coeffs[i] << (s * (d - i) as u64));
        }
        Sign::of(&h)
    }

    /// Exact value at `x` by Horner's rule.
    pub fn value_at(&self, x: &Dyadic) -> BigRational {
        let (num, s) = x.as_fraction();
        let x = BigRational::new(num, BigInt::one() << s);
        let mut h = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            h = h * &x + BigRational::from_integer(c.clone());
        }
        h
    }

    pub fn sign_at_dyadic(&self, x: &Dyadic) -> Sign {
        let (num, s) = x.as_fraction();
        self.sign_at(&num, s)
    }

    /// Pseudo-remainder of `self` by `b`, scaled by a positive constant.
    pub fn prem_positive(&self, b: &DensePolynomial) -> DensePolynomial {
        let db = b.coeffs.len() - 1;
        let lb = b.lc().clone();
        let mut r = self.coeffs.clone();
        let mut negate = false;
        while r.len() > db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * bc;
            }
            if lb.is_negative() {
                negate = !negate;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        if negate {
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        DensePolynomial::new(r)
    }

    /// Primitive greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &DensePolynomial) -> DensePolynomial {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem_positive(&b).primitive();
            a = b;
            b = r;
        }
        if !a.is_zero() && a.lc().is_negative() {
            a = DensePolynomial { coeffs: a.coeffs.iter().map(|c| -c).collect() };
        }
        a
    }

    pub(crate) fn to_q(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }
}

/// Positive integer multiple of a rational polynomial, made primitive.
pub(crate) fn from_q(q: &[BigRational]) -> DensePolynomial {
    let mut l = BigInt::one();
    for c in q {
        l = l.lcm(c.denom());
    }
    DensePolynomial::new(q.iter().map(|c| c.numer() * (&l / c.denom())).collect()).primitive()
}

fn trim_q(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn q_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim_q((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub(crate) fn q_derivative(a: &[BigRational]) -> Vec<BigRational> {
    trim_q(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

/// Exact quotient `a / b` over the rationals (remainder discarded).
pub(crate) fn q_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let a = trim_q(a.to_vec());
    if a.len() < b.len() {
        return Vec::new();
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a;
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim_q(r);
        if r.len() <= db {
            break;
        }
    }
    trim_q(q)
}
