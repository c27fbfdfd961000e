use alloc::vec::Vec;

use super::eval::{eval_balls, exact_precision, guard_bits};
use super::{Dyadic, Mag};
use crate::poly::SparsePolynomial;
use crate::{Error, Result, Stats};

/// The `2*ceil(k/2) + 1` equally spaced points `center + (i - ceil(k/2)) * spacing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipointSet {
    pub center: Dyadic,
    pub spacing: Dyadic,
    pub k: usize,
}

impl MultipointSet {
    pub fn new(center: Dyadic, spacing: Dyadic, k: usize) -> Result<Self> {
        if spacing < Dyadic::zero() {
            return Err(Error::Contract("multipoint spacing must be nonnegative"));
        }
        Ok(MultipointSet { center, spacing, k: k.max(1) })
    }

    pub fn half(&self) -> usize {
        self.k.div_ceil(2)
    }

    pub fn len(&self) -> usize {
        2 * self.half() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> Dyadic {
        let off = i as i64 - self.half() as i64;
        &self.center + &(&self.spacing * &Dyadic::from(off))
    }

    pub fn points(&self) -> Vec<Dyadic> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// A point of a multipoint set where `|p|` is within a factor 4 of the
/// maximum over the set, with `2^(t-1) <= |p(point)| <= max <= 2^(t+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePoint {
    pub point: Dyadic,
    pub index: usize,
    pub t: i64,
}

/// `t` with `2^(t - 1/2) <= v < 2^(t + 1/2)` (up to the rounding of `v`).
fn nearest_log2(v: &Dyadic) -> i64 {
    let f = v.floor_log2().expect("nonzero");
    let sq = v * v;
    if sq >= Dyadic::pow2(2 * f + 1) {
        f + 1
    } else {
        f
    }
}

/// Chooses an admissible point of `m` for `p`; see [`admissible_point_from`].
pub fn admissible_point(p: &SparsePolynomial, m: &MultipointSet, stats: &mut Stats) -> Result<AdmissiblePoint> {
    admissible_point_from(p, m, 1, stats).map(|(a, _)| a)
}

/// Evaluates all points in lock step with precision `K = start, 2 start, ...`
/// until the point of largest certified magnitude is provably within a
/// factor 4 of every other value. Ties go to the smallest index. Falls back
/// to exact values once the working precision would make balls exact.
pub fn admissible_point_from(
    p: &SparsePolynomial,
    m: &MultipointSet,
    start: u64,
    stats: &mut Stats,
) -> Result<(AdmissiblePoint, u64)> {
    let pts = m.points();
    let guard = guard_bits(p);
    let cap = pts.iter().map(|x| exact_precision(p, x)).max().unwrap_or(64);
    let mut k = start.max(1);
    loop {
        let prec = k + guard;
        if prec >= cap {
            break;
        }
        let balls: Vec<_> = pts
            .iter()
            .map(|x| {
                stats.eval(prec);
                eval_balls(&[p], x, prec).pop().unwrap()
            })
            .collect();
        if balls.iter().all(|b| b.is_exact() && b.mid.is_zero()) {
            return Err(Error::DegenerateMultipoint);
        }
        let mut best = 0;
        let mut best_lo = balls[0].lower_abs();
        for (i, b) in balls.iter().enumerate().skip(1) {
            let lo = b.lower_abs();
            if lo > best_lo {
                best = i;
                best_lo = lo;
            }
        }
        if !best_lo.is_zero() {
            let t = nearest_log2(&balls[best].mid);
            let hi = balls.iter().map(|b| b.upper_abs()).max().unwrap();
            if best_lo >= Mag::pow2(t - 1) && hi <= Mag::pow2(t + 1) {
                return Ok((AdmissiblePoint { point: pts[best].clone(), index: best, t }, k));
            }
        }
        k *= 2;
    }
    stats.eval(cap);
    let vals: Vec<Dyadic> = pts.iter().map(|x| p.eval_exact(x).abs()).collect();
    let mut best = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    if vals[best].is_zero() {
        return Err(Error::DegenerateMultipoint);
    }
    let t = nearest_log2(&vals[best]);
    Ok((AdmissiblePoint { point: pts[best].clone(), index: best, t }, k))
}
