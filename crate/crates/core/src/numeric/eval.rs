use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::{Ball, Dyadic, Mag, Sign};
use crate::poly::{ceil_log2, SparsePolynomial};
use crate::Stats;

/// Approximation `approx` of a value `v` with `|v - approx| < 2^-error_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxValue {
    pub approx: Dyadic,
    pub error_exp: u64,
}

/// Guard bits `ceil(log2(2k ceil(log2(n+1)) + k)) + 2` for a k-nomial of degree n.
pub fn guard_bits(p: &SparsePolynomial) -> u64 {
    let k = p.num_terms().max(1) as u64;
    let ln = ceil_log2(p.degree() + 1).max(1);
    ceil_log2(2 * k * ln + k) + 2
}

/// Working precision beyond which ball evaluation of `p` at `x` is exact.
pub fn exact_precision(p: &SparsePolynomial, x: &Dyadic) -> u64 {
    let n = p.degree();
    let cbits = p.terms().iter().map(|t| t.coeff.bits()).max().unwrap_or(1);
    let xb = x.bits() + x.exponent().unsigned_abs();
    n.saturating_mul(xb).saturating_add(cbits).saturating_add(64)
}

/// Ball enclosures of several polynomials at one point, sharing the powers of `x`.
pub fn eval_balls(polys: &[&SparsePolynomial], x: &Dyadic, prec: u64) -> Vec<Ball> {
    let xb = Ball::rounded(x.clone(), Mag::ZERO, prec);
    let max_exp = polys.iter().map(|p| p.degree()).max().unwrap_or(0);
    let mut squares = Vec::new();
    if max_exp > 0 {
        squares.push(xb);
        let nbits = 64 - max_exp.leading_zeros() as usize;
        for i in 1..nbits {
            let s = squares[i - 1].mul(&squares[i - 1], prec);
            squares.push(s);
        }
    }
    let power = |e: u64| -> Ball {
        let mut acc: Option<Ball> = None;
        for (i, sq) in squares.iter().enumerate() {
            if e >> i & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(sq, prec),
                });
            }
        }
        acc.unwrap_or_else(|| Ball::exact(Dyadic::one()))
    };
    polys
        .iter()
        .map(|p| {
            let mut sum = Ball::exact(Dyadic::zero());
            for t in p.terms() {
                let term = power(t.exp).mul_int(&t.coeff, prec);
                sum = sum.add(&term, prec);
            }
            sum
        })
        .collect()
}

pub fn eval_ball(p: &SparsePolynomial, x: &Dyadic, prec: u64) -> Ball {
    eval_balls(&[p], x, prec).pop().unwrap()
}

/// `log2 |x|` rounded up to a multiple of `2^-16`, as a fixed-point number.
fn log2_fixed16(x: &Dyadic) -> Option<i128> {
    let f = x.floor_log2()?;
    let (y, _) = x.abs().round_bits(31);
    // y in [1, 2) scaled by 2^30.
    let m = y.mantissa().to_i128()?;
    let mut y = m << (y.exponent() + 30 - f);
    let mut frac: i128 = 0;
    for i in 1..=16 {
        y = (y * y) >> 30;
        if y >= 2 << 30 {
            y >>= 1;
            frac |= 1 << (16 - i);
        }
    }
    Some(((f as i128) << 16) + frac + 1)
}

/// Estimate of `log2 max_i |a_i x^(e_i)|` (at least 0) plus `log2 k`, used
/// as a starting precision.
pub(crate) fn magnitude_bits(p: &SparsePolynomial, x: &Dyadic) -> u64 {
    let lx = log2_fixed16(x);
    let mut best: i128 = 0;
    for t in p.terms() {
        let mut b = (t.coeff.bits() as i128) << 16;
        if t.exp > 0 {
            match lx {
                Some(l) => b += l * t.exp as i128,
                None => continue,
            }
        }
        best = best.max(b);
    }
    let bits = ((best + 0xffff) >> 16).min(u64::MAX as i128 / 4) as u64;
    bits + 1 + ceil_log2(p.num_terms() as u64)
}

/// `p(x)` to absolute error `< 2^-k`.
pub fn eval_approx(p: &SparsePolynomial, x: &Dyadic, k: u64, stats: &mut Stats) -> ApproxValue {
    let lsb = -(k as i64) - 2;
    let mut prec = k + magnitude_bits(p, x) + guard_bits(p) + 2;
    loop {
        stats.eval(prec);
        let b = eval_ball(p, x, prec);
        if b.rad <= Mag::pow2(lsb) {
            // floor_to adds < 2^lsb, so the total stays below 2^(-k-1).
            return ApproxValue { approx: b.mid.floor_to(lsb), error_exp: k };
        }
        prec *= 2;
    }
}

/// Sign of `p(x)`, with precision doubling from `start` and an exact fallback
/// once the working precision reaches `cap`. Returns the sign and the
/// precision that settled it.
pub fn certified_sign_from(p: &SparsePolynomial, x: &Dyadic, start: u64, cap: u64, stats: &mut Stats) -> (Sign, u64) {
    if p.is_zero() {
        return (Sign::Zero, 0);
    }
    if x.is_zero() {
        return (Sign::of(&p.constant_term()), 0);
    }
    let guard = guard_bits(p);
    let mut k = start.max(1);
    loop {
        let prec = k + guard;
        if prec >= cap {
            stats.eval(cap);
            return (p.sign_exact(x), k);
        }
        stats.eval(prec);
        if let Some(s) = eval_ball(p, x, prec).sign() {
            return (s, k);
        }
        k *= 2;
    }
}

/// Certified sign of `p(x)`: precision `K = 1, 2, 4, ...` up to `k_cap`, then
/// exact evaluation.
pub fn certified_sign(p: &SparsePolynomial, x: &Dyadic, k_cap: u64, stats: &mut Stats) -> Sign {
    certified_sign_from(p, x, 1, k_cap.saturating_add(guard_bits(p)), stats).0
}

/// Default exact-fallback cap for [`certified_sign`].
pub fn default_sign_cap(p: &SparsePolynomial, x: &Dyadic) -> u64 {
    exact_precision(p, x)
}
