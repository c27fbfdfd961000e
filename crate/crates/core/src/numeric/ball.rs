//! Midpoint-radius arithmetic over dyadics.
//!
//! A [`Ball`] `(m, r)` encloses every real `v` with `|v - m| <= r`. Each
//! operation keeps at most `prec` significant bits in the midpoint and folds
//! the rounding error into the radius, so enclosures stay valid while costs
//! depend on `prec` rather than on the magnitude of the values.

use num_bigint::BigInt;

use super::{Dyadic, Mag, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub mid: Dyadic,
    pub rad: Mag,
}

fn top(d: &Dyadic) -> i64 {
    d.floor_log2().map_or(i64::MIN / 4, |f| f + 1)
}

impl Ball {
    pub fn exact(mid: Dyadic) -> Ball {
        Ball { mid, rad: Mag::ZERO }
    }

    /// Rounds `mid` to `prec` bits, adding the error to `rad`.
    pub fn rounded(mid: Dyadic, rad: Mag, prec: u64) -> Ball {
        let (r, inexact) = mid.round_bits(prec);
        if !inexact {
            return Ball { mid: r, rad };
        }
        let err = Mag::pow2(top(&mid) - prec as i64);
        Ball { mid: r, rad: rad.add_up(err) }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower bound of `|v|` over the ball.
    pub fn lower_abs(&self) -> Mag {
        Mag::from_dyadic_down(&self.mid).sub_down(self.rad)
    }

    /// Upper bound of `|v|` over the ball.
    pub fn upper_abs(&self) -> Mag {
        Mag::from_dyadic_up(&self.mid).add_up(self.rad)
    }

    /// The sign shared by every point of the ball, if there is one.
    pub fn sign(&self) -> Option<Sign> {
        if self.rad.is_zero() {
            return Some(self.mid.sign());
        }
        if Mag::from_dyadic_down(&self.mid) > self.rad {
            Some(self.mid.sign())
        } else {
            None
        }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad }
    }

    pub fn add(&self, o: &Ball, prec: u64) -> Ball {
        let rad = self.rad.add_up(o.rad);
        if self.mid.is_zero() || o.mid.is_zero() {
            let m = if self.mid.is_zero() { o.mid.clone() } else { self.mid.clone() };
            return Ball::rounded(m, rad, prec);
        }
        // Truncate both operands just below the result precision so that an
        // addend far below the other never inflates the exact sum.
        let lsb = top(&self.mid).max(top(&o.mid)) - prec as i64 - 2;
        let a = self.mid.floor_to(lsb);
        let b = o.mid.floor_to(lsb);
        let mut rad = rad;
        if a != self.mid {
            rad = rad.add_up(Mag::pow2(lsb));
        }
        if b != o.mid {
            rad = rad.add_up(Mag::pow2(lsb));
        }
        Ball::rounded(&a + &b, rad, prec)
    }

    pub fn sub(&self, o: &Ball, prec: u64) -> Ball {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Ball, prec: u64) -> Ball {
        let ma = Mag::from_dyadic_up(&self.mid);
        let mb = Mag::from_dyadic_up(&o.mid);
        let rad = ma.mul_up(o.rad).add_up(mb.mul_up(self.rad)).add_up(self.rad.mul_up(o.rad));
        Ball::rounded(&self.mid * &o.mid, rad, prec)
    }

    pub fn mul_int(&self, c: &BigInt, prec: u64) -> Ball {
        let rad = self.rad.mul_up(Mag::from_bigint_up(c));
        Ball::rounded(&self.mid * &Dyadic::from(c.clone()), rad, prec)
    }

    /// Quotient enclosure, `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball, prec: u64) -> Option<Ball> {
        let ob = Mag::from_dyadic_down(&o.mid);
        if o.mid.is_zero() || ob <= o.rad {
            return None;
        }
        let (am, bm) = (self.mid.mantissa(), o.mid.mantissa());
        let shift = (prec as i64 + 2 + bm.bits() as i64 - am.bits() as i64).max(0) as u64;
        let q = (am << shift) / bm;
        let exp = self.mid.exponent() - o.mid.exponent() - shift as i64;
        let mid = Dyadic::new(q, exp);
        let mut rad = Mag::pow2(exp);
        if !self.rad.is_zero() || !o.rad.is_zero() {
            let num = Mag::from_dyadic_up(&self.mid).mul_up(o.rad).add_up(ob.mul_up(self.rad));
            let den = ob.mul_down(ob.sub_down(o.rad));
            if den.is_zero() {
                return None;
            }
            rad = rad.add_up(num.div_up(den));
        }
        Some(Ball::rounded(mid, rad, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn contains(b: &Ball, v: &Dyadic) -> bool {
        let diff = (&b.mid - v).abs();
        diff <= b.rad.to_dyadic()
    }

    #[test]
    fn operations_enclose_exact_results() {
        let x = d("123456789123456789123*2^-70");
        let y = d("-987654321987654321*2^-61");
        let prec = 20;
        let bx = Ball::rounded(x.clone(), Mag::ZERO, prec);
        let by = Ball::rounded(y.clone(), Mag::ZERO, prec);
        assert!(contains(&bx, &x));
        assert!(contains(&bx.add(&by, prec), &(&x + &y)));
        assert!(contains(&bx.sub(&by, prec), &(&x - &y)));
        assert!(contains(&bx.mul(&by, prec), &(&x * &y)));
        let q = bx.div(&by, prec).unwrap();
        // x / y is not dyadic; check q * y encloses x instead.
        let back = q.mul(&Ball::exact(y.clone()), 200);
        let slack = Mag::from_dyadic_up(&y).mul_up(q.rad).add_up(back.rad);
        assert!((&back.mid - &x).abs() <= slack.to_dyadic());
        assert!(Ball::exact(Dyadic::zero()).sign() == Some(Sign::Zero));
        assert!(Ball { mid: d("1*2^0"), rad: Mag::from_u64(2) }.sign().is_none());
    }

    #[test]
    fn far_addend_folds_into_radius() {
        let big = Ball::exact(d("1*2^100000"));
        let tiny = Ball::exact(d("1*2^-100000"));
        let s = big.add(&tiny, 64);
        assert_eq!(s.mid, d("1*2^100000"));
        assert!(!s.rad.is_zero());
    }
}
