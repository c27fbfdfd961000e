use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Sign of an exactly or certifiably known value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &BigInt) -> Sign {
        match x.sign() {
            BigSign::Minus => Sign::Negative,
            BigSign::NoSign => Sign::Zero,
            BigSign::Plus => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    /// True for a strict sign change between `self` and `other`.
    pub fn opposes(self, other: Sign) -> bool {
        self.as_i8() * other.as_i8() < 0
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Exact binary rational `m * 2^e`.
///
/// Canonical form keeps the mantissa odd; zero is stored as `0 * 2^0`.
/// The text form is `"<m>*2^<e>"`, e.g. `"3*2^-1"` for 1.5.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Dyadic {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: e }
    }

    fn normalize(&mut self) {
        match self.mantissa.trailing_zeros() {
            None => self.exponent = 0,
            Some(0) => {}
            Some(tz) => {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn sign(&self) -> Sign {
        Sign::of(&self.mantissa)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Bit length of the (odd) mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }

    /// Smallest `e` with `|self| <= 2^e`, or `None` for zero.
    pub fn ceil_log2(&self) -> Option<i64> {
        let f = self.floor_log2()?;
        if self.mantissa.bits() == 1 {
            Some(f)
        } else {
            Some(f + 1)
        }
    }

    /// Rounds toward negative infinity onto the grid `2^lsb`.
    /// The error is `< 2^lsb`, and zero exactly when nothing was dropped.
    pub fn floor_to(&self, lsb: i64) -> Dyadic {
        if self.exponent >= lsb {
            return self.clone();
        }
        let shift = (lsb - self.exponent) as u64;
        Dyadic::new(&self.mantissa >> shift, lsb)
    }

    /// Keeps the `prec` leading bits, rounding toward negative infinity.
    /// Returns the rounded value and whether anything was dropped.
    pub fn round_bits(&self, prec: u64) -> (Dyadic, bool) {
        let bits = self.mantissa.bits();
        if bits <= prec {
            return (self.clone(), false);
        }
        let shift = bits - prec;
        (Dyadic::new(&self.mantissa >> shift, self.exponent + shift as i64), true)
    }

    /// `floor(num / den)` for `den > 0`.
    pub fn floor_div(num: &Dyadic, den: &Dyadic) -> BigInt {
        assert!(den.sign() == Sign::Positive, "floor_div needs a positive divisor");
        let e = num.exponent.min(den.exponent);
        let n = &num.mantissa << ((num.exponent - e) as u64);
        let d = &den.mantissa << ((den.exponent - e) as u64);
        n.div_floor(&d)
    }

    /// `(a + b) / 2`.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }

    /// Exact value as `(numerator, log2 denominator)` with the denominator a
    /// power of two, `self = num / 2^s`, `s >= 0`.
    pub fn as_fraction(&self) -> (BigInt, u64) {
        if self.exponent >= 0 {
            (&self.mantissa << (self.exponent as u64), 0)
        } else {
            (self.mantissa.clone(), (-self.exponent) as u64)
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u64) -> Dyadic {
        let mut result = Dyadic::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Nearest-ish `f64`; informational only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mantissa >> s, self.exponent + s as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let m: i64 = i64::try_from(m).unwrap_or(0);
        let mut v = m as f64;
        let mut e = e;
        while e > 0 {
            let s = e.min(1000);
            v *= pow2f(s as i32);
            e -= s;
        }
        while e < 0 {
            let s = (-e).min(1000);
            v /= pow2f(s as i32);
            e += s;
        }
        v
    }

    /// Decimal rendering truncated toward zero after `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (num, s) = self.as_fraction();
        let neg = num.is_negative();
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let scaled = (num.abs() * scale) >> s;
        let text = scaled.to_string();
        let mut out = String::new();
        if neg && !scaled.is_zero() {
            out.push('-');
        }
        if digits == 0 {
            out.push_str(&text);
            return out;
        }
        let padded = if text.len() <= digits {
            let mut p = String::new();
            for _ in 0..(digits + 1 - text.len()) {
                p.push('0');
            }
            p.push_str(&text);
            p
        } else {
            text
        };
        let (int, frac) = padded.split_at(padded.len() - digits);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
        out
    }
}

fn pow2f(e: i32) -> f64 {
    let mut v = 1.0f64;
    let mut b = 2.0f64;
    let mut e = e as u32;
    while e > 0 {
        if e & 1 == 1 {
            v *= b;
        }
        b *= b;
        e >>= 1;
    }
    v
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign().as_i8(), other.sign().as_i8());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        // Same nonzero sign: compare magnitudes by leading-bit position first.
        let ta = self.exponent + self.mantissa.bits() as i64;
        let tb = other.exponent + other.mantissa.bits() as i64;
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exponent.min(other.exponent);
            let a = self.mantissa.abs() << ((self.exponent - e) as u64);
            let b = other.mantissa.abs() << ((other.exponent - e) as u64);
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << ((self.exponent - e) as u64);
        let b = &rhs.mantissa << ((rhs.exponent - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // Product of odd mantissas is odd: already canonical.
        Dyadic { mantissa: &self.mantissa * &rhs.mantissa, exponent: self.exponent + rhs.exponent }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic, Error> {
        let s = s.trim();
        let err = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        let (m, e) = s.split_once("*2^").ok_or_else(|| err("expected <m>*2^<e>"))?;
        let m: BigInt = m.trim().parse().map_err(|_| err("bad dyadic mantissa"))?;
        let e: i64 = e.trim().parse().map_err(|_| err("bad dyadic exponent"))?;
        Ok(Dyadic::new(m, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_text_round_trip() {
        assert_eq!(d("6*2^-2").to_string(), "3*2^-1");
        assert_eq!(d("0*2^7").to_string(), "0*2^0");
        assert_eq!(d("-3*2^-1").to_string(), "-3*2^-1");
        for s in ["3*2^-1", "-5*2^10", "1*2^0"] {
            assert_eq!(d(s).to_string(), s);
        }
        assert!("3/2".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        let a = d("3*2^-1");
        let b = d("1*2^0");
        assert_eq!((&a + &b).to_string(), "5*2^-1");
        assert_eq!((&a - &b).to_string(), "1*2^-1");
        assert_eq!((&a * &a).to_string(), "9*2^-2");
        assert!(a > b && -&a < -&b);
        assert!(d("-1*2^-100") < Dyadic::zero());
        assert_eq!(Dyadic::floor_div(&d("7*2^0"), &d("1*2^1")), BigInt::from(3));
        assert_eq!(Dyadic::floor_div(&d("-7*2^0"), &d("1*2^1")), BigInt::from(-4));
    }

    #[test]
    fn rounding() {
        let x = d("13*2^-3"); // 1.625
        assert_eq!(x.floor_to(-1).to_string(), "3*2^-1");
        assert_eq!((-&x).floor_to(-1).to_string(), "-1*2^1");
        let (r, inexact) = x.round_bits(2);
        assert!(inexact);
        assert_eq!(r.to_string(), "3*2^-1");
        assert_eq!(x.floor_log2(), Some(0));
        assert_eq!(x.ceil_log2(), Some(1));
        assert_eq!(d("1*2^5").ceil_log2(), Some(5));
    }

    #[test]
    fn decimal() {
        assert_eq!(d("3*2^-1").to_decimal(3), "1.500");
        assert_eq!(d("-1*2^-2").to_decimal(1), "-0.2");
        assert_eq!(d("1*2^-10").to_decimal(2), "0.00");
        assert!((d("5*2^-3").to_f64() - 0.625).abs() < 1e-15);
    }
}
