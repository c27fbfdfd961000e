//! Refinement of an isolating interval of a simple real root.
//!
//! Each iteration tries, in order:
//!
//! * a Newton step: from three points inside `I = (a, b)` an estimate of the
//!   root is formed and the root is located in a subinterval of width at
//!   most `w(I)/N`, after which `N` is squared;
//! * a boundary step: the root is located within `w(I)/N` of `a` or `b`,
//!   also squaring `N`;
//! * a bisection near the midpoint, which replaces `N` by `max(4, sqrt N)`.
//!
//! Every evaluation point is snapped to an admissible point of a small
//! multipoint set so that `|p|` is never needlessly small there, which keeps
//! the working precision proportional to the size of `I` and `N`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::numeric::{
    admissible_point_from, certified_sign_from, eval_balls, exact_precision, guard_bits, Ball, Dyadic, MultipointSet,
    Sign,
};
use crate::poly::{ceil_log2, SparsePolynomial};
use crate::{Error, Result, Stats};

/// Isolating interval `(a, b)` of a simple root together with the speed
/// parameter `N = 2^speed_log` and the (nonzero, opposite) signs of `p` at
/// the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineState {
    pub a: Dyadic,
    pub b: Dyadic,
    /// `log2 N`; always a power of two, at least 2.
    pub speed_log: u64,
    pub sign_a: Sign,
    pub sign_b: Sign,
    /// Working precision in excess of `-log2 w` that evaluations at
    /// distance about `w` from the root needed so far.
    pub prec_hint: u64,
}

impl RefineState {
    pub fn new(a: Dyadic, b: Dyadic, sign_a: Sign, sign_b: Sign) -> Result<Self> {
        if a >= b {
            return Err(Error::Contract("refine interval needs a < b"));
        }
        if !sign_a.opposes(sign_b) {
            return Err(Error::Contract("refine interval needs a strict sign change"));
        }
        Ok(RefineState { a, b, speed_log: 2, sign_a, sign_b, prec_hint: 16 })
    }

    pub fn width(&self) -> Dyadic {
        &self.b - &self.a
    }
}

/// Result of refinement: an interval, or an exact dyadic root hit on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefineOutcome {
    Interval(RefineState),
    Point(Dyadic),
}

impl RefineOutcome {
    pub fn bounds(&self) -> (Dyadic, Dyadic) {
        match self {
            RefineOutcome::Interval(s) => (s.a.clone(), s.b.clone()),
            RefineOutcome::Point(x) => (x.clone(), x.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Newton,
    Boundary,
    Bisection,
}

/// Root estimate produced by a successful Newton step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEstimate {
    /// Indices (0-based) of the two sample points used.
    pub pair: (usize, usize),
    pub lambda: Dyadic,
    /// Grid cell `floor(4N (lambda - a) / w)`.
    pub cell: BigInt,
}

/// One refinement iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// `log2 N` before the step.
    pub speed_log: u64,
    /// Whether the width shrank by at least the factor `N`.
    pub contracted_by_speed: bool,
    pub estimate: Option<NewtonEstimate>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairState {
    Pending,
    Discard,
    Proceed,
}

struct Refiner<'a> {
    p: &'a SparsePolynomial,
    dp: SparsePolynomial,
    n: u64,
    k: usize,
    log_n: u64,
    guard: u64,
    w_bits: i64,
    off: u64,
    far: u64,
    near: u64,
    trace: Option<Vec<StepRecord>>,
    last_estimate: Option<NewtonEstimate>,
}

impl<'a> Refiner<'a> {
    fn new(p: &'a SparsePolynomial, off: u64) -> Self {
        let n = p.degree().max(1);
        Refiner {
            p,
            dp: p.derivative(),
            n,
            k: p.num_terms(),
            log_n: ceil_log2(n + 1),
            guard: guard_bits(p),
            w_bits: 0,
            off,
            far: 1,
            near: 1,
            trace: None,
            last_estimate: None,
        }
    }

    /// Starting precisions for the current interval: `far` for points at
    /// distance about `w` from the root, `near` for distance about `w/N`.
    fn set_starts(&mut self, s: &RefineState) {
        self.w_bits = -s.width().floor_log2().unwrap_or(0);
        self.far = (self.w_bits + self.off as i64).max(16) as u64;
        self.near = self.far + s.speed_log;
    }

    /// Remembers the precision a point at distance about `w` needed.
    fn learn(&mut self, k: u64) {
        self.off = (k as i64 - self.w_bits).max(8) as u64;
    }

    fn sign(&mut self, x: &Dyadic, start: u64, stats: &mut Stats) -> Sign {
        let cap = exact_precision(self.p, x);
        certified_sign_from(self.p, x, start, cap, stats).0
    }

    /// Admissible point of the multipoint set around `center` and the
    /// precision that certified it.
    fn admissible(&mut self, center: Dyadic, spacing: Dyadic, start: u64, stats: &mut Stats) -> Result<(Dyadic, u64)> {
        let m = MultipointSet::new(center.clone(), spacing, self.k)?;
        match admissible_point_from(self.p, &m, start, stats) {
            Ok((a, k)) => Ok((a.point, k)),
            Err(Error::DegenerateMultipoint) => Ok((center, start)),
            Err(e) => Err(e),
        }
    }

    /// Admissible point near `at` and the sign of `p` there.
    fn snapped(&mut self, at: Dyadic, spacing: &Dyadic, start: u64, stats: &mut Stats) -> Result<(Dyadic, Sign)> {
        let (x, _) = self.admissible(at, spacing.clone(), start, stats)?;
        let s = self.sign(&x, start, stats);
        Ok((x, s))
    }

    fn newton_test(&mut self, s: &RefineState, stats: &mut Stats) -> Result<Option<RefineOutcome>> {
        self.last_estimate = None;
        let w = s.width();
        let eps_log = 5 + self.log_n as i64;
        let delta = w.mul_pow2(-eps_log);
        let mut xs = Vec::with_capacity(3);
        let mut used = 0;
        for j in 1..=3i64 {
            let c = &s.a + &(&w * &Dyadic::from(j)).mul_pow2(-2);
            let (x, k) = self.admissible(c, delta.clone(), self.far, stats)?;
            xs.push(x);
            used = used.max(k);
        }
        self.learn(used);
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let mut state = [PairState::Pending; 3];
        let cap = 2 * xs.iter().map(|x| exact_precision(self.p, x)).max().unwrap_or(64);
        let n = Dyadic::from(self.n as i64);
        let two_w = w.mul_pow2(1);
        let mut k = self.near;
        loop {
            let prec = k + self.guard;
            let mut vals: [Option<(Ball, Ball)>; 3] = [None, None, None];
            for (pi, &(i, j)) in pairs.iter().enumerate() {
                if state[pi] != PairState::Pending {
                    continue;
                }
                for idx in [i, j] {
                    if vals[idx].is_none() {
                        stats.eval(prec);
                        stats.eval(prec);
                        let mut r = eval_balls(&[self.p, &self.dp], &xs[idx], prec);
                        let d = r.pop().unwrap();
                        let v = r.pop().unwrap();
                        vals[idx] = Some((v, d));
                    }
                }
            }
            let quot = |v: &Option<(Ball, Ball)>| -> (Option<Ball>, bool) {
                match v {
                    None => (None, false),
                    Some((pv, dv)) => {
                        let dead = dv.is_exact() && dv.mid.is_zero();
                        (pv.div(dv, prec), dead)
                    }
                }
            };
            let q: Vec<(Option<Ball>, bool)> = vals.iter().map(quot).collect();
            for (pi, &(i, j)) in pairs.iter().enumerate() {
                if state[pi] != PairState::Pending {
                    continue;
                }
                if q[i].1 || q[j].1 {
                    state[pi] = PairState::Discard;
                    continue;
                }
                let (Some(vi), Some(vj)) = (&q[i].0, &q[j].0) else { continue };
                let (lo_i, hi_i) = (vi.lower_abs().to_dyadic(), vi.upper_abs().to_dyadic());
                let (lo_j, hi_j) = (vj.lower_abs().to_dyadic(), vj.upper_abs().to_dyadic());
                let diff = vi.sub(vj, prec);
                let dlo = diff.lower_abs().to_dyadic();
                let dhi = diff.upper_abs().to_dyadic();
                let four_n = n.mul_pow2(2);
                let eight_n = n.mul_pow2(3);
                let far = (lo_i > w && lo_j > w) || &dhi * &four_n < w;
                let close = hi_i < two_w && hi_j < two_w && &dlo * &eight_n > w;
                let never = lo_i >= two_w || lo_j >= two_w || &dhi * &eight_n <= w;
                state[pi] = if far {
                    PairState::Discard
                } else if close {
                    PairState::Proceed
                } else if never {
                    PairState::Discard
                } else {
                    PairState::Pending
                };
            }
            for (pi, &(i, j)) in pairs.iter().enumerate() {
                if state[pi] != PairState::Proceed {
                    continue;
                }
                state[pi] = PairState::Discard;
                if let Some(out) = self.newton_finish(s, &xs, (i, j), k, cap, stats)? {
                    return Ok(Some(out));
                }
            }
            if state.iter().all(|st| *st != PairState::Pending) || prec > cap {
                return Ok(None);
            }
            k *= 2;
        }
    }

    fn newton_finish(
        &mut self,
        s: &RefineState,
        xs: &[Dyadic],
        (i, j): (usize, usize),
        start: u64,
        cap: u64,
        stats: &mut Stats,
    ) -> Result<Option<RefineOutcome>> {
        let w = s.width();
        let tol = w.mul_pow2(-(s.speed_log as i64) - 5);
        let dx = Ball::exact(&xs[j] - &xs[i]);
        let mut k = start;
        let lambda = loop {
            let prec = k + self.guard;
            if prec > 2 * cap {
                return Ok(None);
            }
            let mut v = Vec::with_capacity(2);
            for idx in [i, j] {
                stats.eval(prec);
                stats.eval(prec);
                let mut r = eval_balls(&[self.p, &self.dp], &xs[idx], prec);
                let d = r.pop().unwrap();
                let pv = r.pop().unwrap();
                v.push(pv.div(&d, prec));
            }
            if let (Some(vi), Some(vj)) = (&v[0], &v[1]) {
                if let Some(q) = dx.div(&vi.sub(vj, prec), prec) {
                    let lam = Ball::exact(xs[i].clone()).add(&vi.mul(&q, prec), prec);
                    if lam.rad.to_dyadic() <= tol {
                        break lam.mid;
                    }
                }
            }
            k *= 2;
        };
        if lambda < s.a || lambda > s.b {
            return Ok(None);
        }
        let cell = w.mul_pow2(-(s.speed_log as i64) - 2);
        let ell = Dyadic::floor_div(&(&lambda - &s.a), &cell);
        let cells = BigInt::from(1u8) << (s.speed_log + 2);
        let lo_idx = if ell.is_positive() { &ell - BigInt::from(1u8) } else { BigInt::zero() };
        let hi_idx = (&ell + BigInt::from(2u8)).min(cells.clone());
        let spacing = w.mul_pow2(-(5 + self.log_n as i64) - s.speed_log as i64);
        let (na, sa) = if lo_idx.is_zero() {
            (s.a.clone(), s.sign_a)
        } else {
            let at = &s.a + &(&cell * &Dyadic::from(lo_idx.clone()));
            self.snapped(at, &spacing, self.near, stats)?
        };
        if sa == Sign::Zero {
            return Ok(Some(RefineOutcome::Point(na)));
        }
        let (nb, sb) = if hi_idx == cells {
            (s.b.clone(), s.sign_b)
        } else {
            let at = &s.a + &(&cell * &Dyadic::from(hi_idx.clone()));
            self.snapped(at, &spacing, self.near, stats)?
        };
        if sb == Sign::Zero {
            return Ok(Some(RefineOutcome::Point(nb)));
        }
        if !sa.opposes(sb) || na >= nb {
            return Ok(None);
        }
        self.last_estimate = Some(NewtonEstimate { pair: (i, j), lambda, cell: ell });
        Ok(Some(RefineOutcome::Interval(RefineState {
            a: na,
            b: nb,
            speed_log: s.speed_log * 2,
            sign_a: sa,
            sign_b: sb,
            prec_hint: self.off,
        })))
    }

    fn boundary_test(&mut self, s: &RefineState, stats: &mut Stats) -> Result<Option<RefineOutcome>> {
        let w = s.width();
        let spacing = w.mul_pow2(-(2 + self.log_n as i64) - s.speed_log as i64);
        let half = w.mul_pow2(-(s.speed_log as i64) - 1);
        let (ml, sl) = self.snapped(&s.a + &half, &spacing, self.near, stats)?;
        if sl == Sign::Zero {
            return Ok(Some(RefineOutcome::Point(ml)));
        }
        if sl.opposes(s.sign_a) {
            return Ok(Some(RefineOutcome::Interval(RefineState {
                a: s.a.clone(),
                b: ml,
                speed_log: s.speed_log * 2,
                sign_a: s.sign_a,
                sign_b: sl,
                prec_hint: self.off,
            })));
        }
        let (mr, sr) = self.snapped(&s.b - &half, &spacing, self.near, stats)?;
        if sr == Sign::Zero {
            return Ok(Some(RefineOutcome::Point(mr)));
        }
        if sr.opposes(s.sign_b) {
            return Ok(Some(RefineOutcome::Interval(RefineState {
                a: mr,
                b: s.b.clone(),
                speed_log: s.speed_log * 2,
                sign_a: sr,
                sign_b: s.sign_b,
                prec_hint: self.off,
            })));
        }
        Ok(None)
    }

    fn bisect_step(&mut self, s: &RefineState, stats: &mut Stats) -> Result<RefineOutcome> {
        let w = s.width();
        let spacing = w.mul_pow2(-(2 + self.log_n as i64));
        let (m, sm) = self.snapped(Dyadic::midpoint(&s.a, &s.b), &spacing, self.far, stats)?;
        let speed_log = (s.speed_log / 2).max(2);
        Ok(match sm {
            Sign::Zero => RefineOutcome::Point(m),
            _ if sm.opposes(s.sign_a) => RefineOutcome::Interval(RefineState {
                a: s.a.clone(),
                b: m,
                speed_log,
                sign_a: s.sign_a,
                sign_b: sm,
                prec_hint: self.off,
            }),
            _ => RefineOutcome::Interval(RefineState {
                a: m,
                b: s.b.clone(),
                speed_log,
                sign_a: sm,
                sign_b: s.sign_b,
                prec_hint: self.off,
            }),
        })
    }

    fn step(&mut self, s: &RefineState, stats: &mut Stats) -> Result<(StepKind, RefineOutcome)> {
        self.set_starts(s);
        if let Some(out) = self.newton_test(s, stats)? {
            stats.newton_steps += 1;
            return Ok((StepKind::Newton, out));
        }
        if let Some(out) = self.boundary_test(s, stats)? {
            stats.boundary_steps += 1;
            return Ok((StepKind::Boundary, out));
        }
        stats.bisection_steps += 1;
        Ok((StepKind::Bisection, self.bisect_step(s, stats)?))
    }

    fn run(&mut self, mut s: RefineState, bits: u64, stats: &mut Stats) -> Result<RefineOutcome> {
        let target = Dyadic::pow2(-(bits as i64));
        while s.width() >= target {
            stats.refinement_iterations += 1;
            // A contraction by w / 2^-(bits+1) already reaches the target; a
            // larger N only raises the precision of the final step.
            let w_log = s.width().ceil_log2().unwrap_or(0);
            let enough = u64::try_from(w_log + bits as i64 + 1).unwrap_or(1).max(2);
            let (kind, out) = if enough < s.speed_log {
                let capped = RefineState { speed_log: enough, ..s.clone() };
                let (kind, out) = self.step(&capped, stats)?;
                // N was not used in full, so it is not squared either.
                let speed_log = if kind == StepKind::Bisection { (s.speed_log / 2).max(2) } else { s.speed_log };
                let out = match out {
                    RefineOutcome::Interval(next) => RefineOutcome::Interval(RefineState { speed_log, ..next }),
                    pt => pt,
                };
                (kind, out)
            } else {
                self.step(&s, stats)?
            };
            match out {
                RefineOutcome::Point(x) => {
                    if x <= s.a || x >= s.b {
                        return Err(Error::Invariant(alloc::format!("exact root {x} outside ({}, {})", s.a, s.b)));
                    }
                    return Ok(RefineOutcome::Point(x));
                }
                RefineOutcome::Interval(next) => {
                    check_nested(&s, &next)?;
                    if let Some(tr) = self.trace.as_mut() {
                        let shrink = &next.width() * &Dyadic::pow2(s.speed_log as i64);
                        tr.push(StepRecord {
                            kind,
                            speed_log: s.speed_log,
                            contracted_by_speed: shrink <= s.width(),
                            estimate: if kind == StepKind::Newton { self.last_estimate.take() } else { None },
                        });
                    }
                    s = next;
                }
            }
        }
        Ok(RefineOutcome::Interval(s))
    }
}

fn check_nested(old: &RefineState, new: &RefineState) -> Result<()> {
    if new.a < old.a || new.b > old.b || new.a >= new.b || !new.sign_a.opposes(new.sign_b) {
        return Err(Error::Invariant(alloc::format!(
            "refinement produced ({}, {}) from ({}, {})",
            new.a,
            new.b,
            old.a,
            old.b
        )));
    }
    Ok(())
}

/// Refines `s` until its width is below `2^-bits`, or an exact root is met.
pub fn refine_root(p: &SparsePolynomial, s: RefineState, bits: u64, stats: &mut Stats) -> Result<RefineOutcome> {
    Refiner::new(p, s.prec_hint).run(s, bits, stats)
}

/// Like [`refine_root`], also returning one record per iteration.
pub fn refine_root_traced(
    p: &SparsePolynomial,
    s: RefineState,
    bits: u64,
    stats: &mut Stats,
) -> Result<(RefineOutcome, Vec<StepRecord>)> {
    let mut r = Refiner::new(p, s.prec_hint);
    r.trace = Some(Vec::new());
    let out = r.run(s, bits, stats)?;
    Ok((out, r.trace.take().unwrap_or_default()))
}

/// Refines several disjoint isolating intervals of `p`.
pub fn refine_all(p: &SparsePolynomial, states: Vec<RefineState>, bits: u64, stats: &mut Stats) -> Result<Vec<RefineOutcome>> {
    states.into_iter().map(|s| refine_root(p, s, bits, stats)).collect()
}

/// One Newton step; `None` when no pair of sample points succeeds.
pub fn newton_test(p: &SparsePolynomial, s: &RefineState, stats: &mut Stats) -> Result<Option<RefineOutcome>> {
    let mut r = Refiner::new(p, s.prec_hint);
    r.set_starts(s);
    r.newton_test(s, stats)
}

/// One boundary step; `None` when the root is not near either endpoint.
pub fn boundary_test(p: &SparsePolynomial, s: &RefineState, stats: &mut Stats) -> Result<Option<RefineOutcome>> {
    let mut r = Refiner::new(p, s.prec_hint);
    r.set_starts(s);
    r.boundary_test(s, stats)
}

/// One bisection step around the midpoint.
pub fn bisect_step(p: &SparsePolynomial, s: &RefineState, stats: &mut Stats) -> Result<RefineOutcome> {
    let mut r = Refiner::new(p, s.prec_hint);
    r.set_starts(s);
    r.bisect_step(s, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePolynomial {
        s.parse().unwrap()
    }
    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn state(q: &SparsePolynomial, a: &str, b: &str) -> RefineState {
        let (a, b) = (d(a), d(b));
        let (sa, sb) = (q.sign_exact(&a), q.sign_exact(&b));
        RefineState::new(a, b, sa, sb).unwrap()
    }

    #[test]
    fn sqrt2_to_64_bits() {
        let q = p("x^2 - 2");
        let mut st = Stats::default();
        let out = refine_root(&q, state(&q, "1*2^0", "1*2^1"), 64, &mut st).unwrap();
        let RefineOutcome::Interval(s) = out else { panic!("sqrt 2 is not dyadic") };
        assert!(s.width() < Dyadic::pow2(-64));
        assert!(q.sign_exact(&s.a).opposes(q.sign_exact(&s.b)));
        assert!(s.a.to_f64() <= core::f64::consts::SQRT_2 && core::f64::consts::SQRT_2 <= s.b.to_f64() + 1e-15);
        assert!(st.refinement_iterations <= 20, "{st:?}");
    }

    #[test]
    fn bisection_keeps_sign_change() {
        let q = p("x^2 - 1");
        let mut st = Stats::default();
        let s = state(&q, "0*2^0", "1*2^1");
        match bisect_step(&q, &s, &mut st).unwrap() {
            RefineOutcome::Interval(n) => {
                assert!(q.sign_exact(&n.a).opposes(q.sign_exact(&n.b)));
                assert!(n.a < Dyadic::one() && Dyadic::one() < n.b);
                assert!(n.width() <= s.width().mul_pow2(-2) * Dyadic::from(3));
                assert_eq!(n.speed_log, 2);
            }
            RefineOutcome::Point(x) => assert_eq!(x, Dyadic::one()),
        }
    }

    #[test]
    fn boundary_step_shrinks_by_speed() {
        // Root at 1/16 close to the left end of (0, 2).
        let q = p("16x - 1");
        let mut st = Stats::default();
        let s = state(&q, "0*2^0", "1*2^1");
        let out = boundary_test(&q, &s, &mut st).unwrap().expect("root near a");
        match out {
            RefineOutcome::Interval(n) => {
                assert_eq!(n.a, Dyadic::zero());
                assert!(n.width() <= s.width().mul_pow2(-2));
                assert_eq!(n.speed_log, 4);
            }
            RefineOutcome::Point(x) => assert_eq!(x, d("1*2^-4")),
        }
    }

    #[test]
    fn quadratic_regime_is_reached() {
        let q = p("x^5 - 3x^2 + 1");
        let mut st = Stats::default();
        let (out, trace) = refine_root_traced(&q, state(&q, "1*2^0", "1*2^1"), 512, &mut st).unwrap();
        assert!(matches!(out, RefineOutcome::Interval(_)));
        let run = trace.windows(3).any(|w| {
            w.iter().all(|r| r.kind != StepKind::Bisection && r.contracted_by_speed)
                && w[1].speed_log == 2 * w[0].speed_log
                && w[2].speed_log == 2 * w[1].speed_log
        });
        assert!(run, "{trace:?}");
    }

    #[test]
    fn rejects_bad_states() {
        assert!(RefineState::new(d("1*2^0"), d("1*2^0"), Sign::Negative, Sign::Positive).is_err());
        assert!(RefineState::new(d("0*2^0"), d("1*2^0"), Sign::Positive, Sign::Positive).is_err());
    }
}
