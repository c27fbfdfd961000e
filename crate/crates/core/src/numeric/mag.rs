//! Nonnegative magnitudes with a short mantissa and directed rounding.
//!
//! Used for error radii and for quick comparisons of bounds.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Dyadic;

const BITS: u32 = 60;

/// `mant * 2^exp` with `mant < 2^60`; zero has `mant == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    mant: u64,
    exp: i64,
}

fn bitlen(v: u128) -> u32 {
    128 - v.leading_zeros()
}

impl Mag {
    pub const ZERO: Mag = Mag { mant: 0, exp: 0 };

    pub fn pow2(e: i64) -> Mag {
        Mag { mant: 1, exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    fn norm(v: u128, exp: i64, up: bool) -> Mag {
        if v == 0 {
            return Mag::ZERO;
        }
        let b = bitlen(v);
        if b <= BITS {
            return Mag { mant: v as u64, exp };
        }
        let shift = b - BITS;
        let mut m = (v >> shift) as u64;
        let mut e = exp + shift as i64;
        if up && (v & ((1u128 << shift) - 1)) != 0 {
            m += 1;
            if m == 1u64 << BITS {
                m >>= 1;
                e += 1;
            }
        }
        Mag { mant: m, exp: e }
    }

    pub fn from_u64(v: u64) -> Mag {
        Mag::norm(v as u128, 0, true)
    }

    fn from_bigint(v: &BigInt, exp: i64, up: bool) -> Mag {
        let (_, mag) = (v.sign(), v.magnitude());
        let bits = mag.bits();
        if bits <= 64 {
            return Mag::norm(mag.to_u64().unwrap() as u128, exp, up);
        }
        let shift = bits - 64;
        let top = (mag >> shift).to_u64().unwrap();
        let lost = mag.trailing_zeros().is_some_and(|tz| tz < shift);
        let m = Mag::norm(top as u128, exp + shift as i64, up);
        if up && lost {
            m.add_ulp()
        } else {
            m
        }
    }

    /// Same value with the mantissa widened to the full 60 bits.
    fn widen(self) -> Mag {
        if self.is_zero() {
            return self;
        }
        let s = BITS - (64 - self.mant.leading_zeros());
        Mag { mant: self.mant << s, exp: self.exp - s as i64 }
    }

    fn add_ulp(self) -> Mag {
        Mag::norm(self.mant as u128 + 1, self.exp, true)
    }

    /// Upper bound of `|d|`.
    pub fn from_dyadic_up(d: &Dyadic) -> Mag {
        Mag::from_bigint(d.mantissa(), d.exponent(), true)
    }

    /// Lower bound of `|d|`.
    pub fn from_dyadic_down(d: &Dyadic) -> Mag {
        Mag::from_bigint(d.mantissa(), d.exponent(), false)
    }

    /// Upper bound of `|v|`.
    pub fn from_bigint_up(v: &BigInt) -> Mag {
        Mag::from_bigint(v, 0, true)
    }

    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.mant), self.exp)
    }

    pub fn mul_pow2(self, k: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag { mant: self.mant, exp: self.exp + k }
        }
    }

    /// Position just above the leading bit (`self < 2^top`).
    fn top(&self) -> i64 {
        self.exp + 64 - self.mant.leading_zeros() as i64
    }

    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.top() - 1)
        }
    }

    pub fn add_up(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.top() >= o.top() { (self.widen(), o) } else { (o.widen(), self) };
        let e = hi.exp.min(lo.exp);
        if hi.exp - e > 64 {
            // `lo` is below one ulp of `hi`.
            return hi.add_ulp();
        }
        let a = (hi.mant as u128) << (hi.exp - e);
        let b = (lo.mant as u128) << (lo.exp - e);
        Mag::norm(a + b, e, true)
    }

    /// `max(0, self - o)` rounded down.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self <= o {
            return Mag::ZERO;
        }
        let this = self.widen();
        let e = this.exp.min(o.exp);
        if this.exp - e > 64 {
            return Mag::norm(this.mant as u128 - 1, this.exp, false);
        }
        let a = (this.mant as u128) << (this.exp - e);
        let b = (o.mant as u128) << (o.exp - e);
        Mag::norm(a - b, e, false)
    }

    pub fn mul_up(self, o: Mag) -> Mag {
        Mag::norm(self.mant as u128 * o.mant as u128, self.exp + o.exp, true)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        Mag::norm(self.mant as u128 * o.mant as u128, self.exp + o.exp, false)
    }

    /// `self / o` rounded up; `o` must be nonzero.
    pub fn div_up(self, o: Mag) -> Mag {
        assert!(!o.is_zero(), "division by zero magnitude");
        let n = (self.mant as u128) << 64;
        let d = o.mant as u128;
        let q = n.div_ceil(d);
        Mag::norm(q, self.exp - o.exp - 64, true)
    }

    /// `self^e` rounded up.
    pub fn pow_up(self, e: u64) -> Mag {
        let mut r = Mag::from_u64(1);
        let mut b = self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_up(b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_up(b);
            }
        }
        r
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top(), o.top());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let e = self.exp.min(o.exp);
        let a = (self.mant as u128) << (self.exp - e);
        let b = (o.mant as u128) << (o.exp - e);
        a.cmp(&b)
    }
}

impl Default for Mag {
    fn default() -> Self {
        Mag::ZERO
    }
}
