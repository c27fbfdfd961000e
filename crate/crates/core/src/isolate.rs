//! Root isolation through the derivative chain.
//!
//! For `p_0 = q` with `q(0) != 0`, the chain `p_0, ..., p_{k-1}` ends in a
//! constant. Going from `p_j` back to `p_{j-1}`: between two consecutive
//! positive roots of `p_j` the polynomial `p_{j-1}` is monotone, so it has a
//! root in such a gap exactly when its signs at the two flanking roots
//! differ, and a root of `p_j` where `p_{j-1}` vanishes is a multiple root
//! of `p_{j-1}`.
//!
//! ## Signs at chain roots
//!
//! Deciding that `p_{j-1}` vanishes at a root of `p_j` needs the root to be
//! known to within `2^-L`, with `L` from [`chain_bound`]. For nonzero signs
//! a much cheaper certificate usually exists: once `|p_{j-1}(mid)|` exceeds
//! `w/2 * max|p_{j-1}'| + 2^-L` the sign is constant (and at least `2^-L` in
//! absolute value) on the whole interval. The root of `p_j` is refined
//! progressively (64, 128, ... bits) until either this certificate holds or
//! the width drops below `2^-L`, where the threshold test of
//! [`sign_at_chain_root`] takes over. [`Isolator::early_sign`] switches the
//! shortcut off.

use alloc::vec::Vec;

use crate::numeric::{
    certified_sign_from, chain_bound, eval_approx, eval_ball, exact_precision, guard_bits, BoundSet, Dyadic, Mag,
    Sign,
};
use crate::poly::SparsePolynomial;
use crate::refine::{refine_root, RefineOutcome, RefineState};
use crate::{Error, Result, Stats};

/// `(lo, hi)` as an open interval, or the exact point `lo` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RootInterval {
    pub fn point(x: Dyadic) -> Self {
        RootInterval { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    /// Image under `x -> -x`.
    pub fn negated(&self) -> Self {
        RootInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

/// One isolated real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub interval: RootInterval,
    pub multiplicity: u32,
    /// Number of leading chain polynomials `p_0, ..., p_{d-1}` vanishing at
    /// the root; equals the multiplicity.
    pub chain_depth: u32,
}

/// A root of a chain polynomial together with the sign of its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRoot {
    pub interval: RootInterval,
    /// Sign of the predecessor polynomial on the interval.
    pub sign: Sign,
    /// Multiplicity as a root of its own chain polynomial.
    pub multiplicity: u32,
}

/// Interval handed to refinement during isolation, kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineInput {
    /// Polynomial being refined (a chain member of `q` or of `q(-x)`).
    pub poly: SparsePolynomial,
    /// Index of `poly` in its chain.
    pub level: usize,
    pub state: RefineState,
}

/// Full result of an isolation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isolation {
    pub roots: Vec<IsolatedRoot>,
    pub refine_inputs: Vec<RefineInput>,
}

/// Splits `(lower, upper)` at the roots of `g` and classifies the pieces for
/// `f`, where `f' = x^(g_min - 1) g` on the positive axis.
///
/// Returns one refinement state per gap with a strict sign change of `f`,
/// and the roots of `g` at which `f` vanishes, carried over with their
/// multiplicity increased by one.
pub fn derive_intervals(
    chain_roots: &[SignedRoot],
    lower: (&Dyadic, Sign),
    upper: (&Dyadic, Sign),
) -> Result<(Vec<RefineState>, Vec<IsolatedRoot>)> {
    let mut simple = Vec::new();
    let mut carried = Vec::new();
    let mut prev_hi = lower.0.clone();
    let mut prev_sign = lower.1;
    let upper_iv = RootInterval::point(upper.0.clone());
    let entries: Vec<(&RootInterval, Sign, u32)> = chain_roots
        .iter()
        .map(|r| (&r.interval, r.sign, r.multiplicity))
        .chain(core::iter::once((&upper_iv, upper.1, 0)))
        .collect();
    for (idx, (iv, sign, mult)) in entries.iter().enumerate() {
        if iv.lo < prev_hi {
            return Err(Error::Invariant(alloc::format!("chain roots overlap or are unsorted at {}", iv.lo)));
        }
        if prev_sign.opposes(*sign) {
            simple.push(RefineState::new(prev_hi.clone(), iv.lo.clone(), prev_sign, *sign)?);
        }
        let is_sentinel = idx + 1 == entries.len();
        if *sign == Sign::Zero && !is_sentinel {
            carried.push(IsolatedRoot { interval: (*iv).clone(), multiplicity: mult + 1, chain_depth: mult + 1 });
        }
        prev_hi = iv.hi.clone();
        prev_sign = *sign;
    }
    Ok((simple, carried))
}

/// Sign of `f` at the root of the next chain polynomial isolated by `iv`,
/// which must have width `< 2^-L`. Zero is returned when the approximation
/// of `f(mid)` to `2^-(L/2)` has absolute value at most `2^-(L/4) - 1`.
pub fn sign_at_chain_root(f: &SparsePolynomial, iv: &RootInterval, bounds: &BoundSet, stats: &mut Stats) -> Result<Sign> {
    if iv.is_point() {
        let cap = exact_precision(f, &iv.lo);
        return Ok(certified_sign_from(f, &iv.lo, 1, cap, stats).0);
    }
    if iv.width() >= Dyadic::pow2(bounds.zero_threshold_exp()) {
        return Err(Error::Contract("chain root interval must be narrower than 2^-L"));
    }
    let a = eval_approx(f, &iv.midpoint(), (-bounds.decision_error_exp()) as u64, stats);
    if a.approx.abs() <= Dyadic::pow2(bounds.nonzero_threshold_exp() - 1) {
        Ok(Sign::Zero)
    } else {
        Ok(a.approx.sign())
    }
}

/// Certified sign of `f` on the whole closed interval, with `|f| > 2^-L`
/// throughout, or `None` if the interval is too wide to tell.
fn interval_sign(f: &SparsePolynomial, iv: &RootInterval, l: u64, hint: &mut u64, stats: &mut Stats) -> Option<Sign> {
    let r = Mag::from_dyadic_up(&iv.lo.abs().max(iv.hi.abs()));
    let mut deriv = Mag::ZERO;
    for t in f.terms().iter().filter(|t| t.exp > 0) {
        let c = Mag::from_bigint_up(&t.coeff).mul_up(Mag::from_u64(t.exp));
        deriv = deriv.add_up(c.mul_up(r.pow_up(t.exp - 1)));
    }
    let half_w = Mag::from_dyadic_up(&iv.width()).mul_pow2(-1);
    let margin = half_w.mul_up(deriv).add_up(Mag::pow2(-(l as i64)));
    let mid = iv.midpoint();
    let cap = exact_precision(f, &mid);
    let guard = guard_bits(f);
    let mut k = (*hint).max(16);
    loop {
        let prec = (k + guard).min(cap);
        stats.eval(prec);
        let b = eval_ball(f, &mid, prec);
        if b.lower_abs() > margin {
            *hint = k;
            return Some(b.mid.sign());
        }
        // Once the radius is far below the margin more precision cannot help.
        if b.upper_abs() <= margin || prec >= cap || b.rad.mul_pow2(4) < margin {
            return None;
        }
        k *= 2;
    }
}

struct ChainRoot {
    iv: RootInterval,
    multiplicity: u32,
    state: Option<RefineState>,
}

/// Configurable isolation driver.
#[derive(Clone, Debug)]
pub struct Isolator {
    target_bits: Option<u64>,
    early_sign: bool,
    record_inputs: bool,
}

impl Default for Isolator {
    fn default() -> Self {
        Isolator::new()
    }
}

impl Isolator {
    pub fn new() -> Self {
        Isolator { target_bits: None, early_sign: true, record_inputs: false }
    }

    /// Width `< 2^-bits` for the reported simple roots. Defaults to the
    /// chain bound `L`. Multiple roots always come out narrower than `2^-L`.
    pub fn target_bits(mut self, bits: u64) -> Self {
        self.target_bits = Some(bits);
        self
    }

    /// Enables the interval sign certificate for chain roots (default on).
    pub fn early_sign(mut self, on: bool) -> Self {
        self.early_sign = on;
        self
    }

    /// Keeps a copy of every interval passed to refinement.
    pub fn record_refine_inputs(mut self, on: bool) -> Self {
        self.record_inputs = on;
        self
    }

    pub fn isolate_all(&self, p: &SparsePolynomial, stats: &mut Stats) -> Result<Vec<IsolatedRoot>> {
        self.run(p, stats).map(|i| i.roots)
    }

    pub fn isolate_positive(&self, q: &SparsePolynomial, stats: &mut Stats) -> Result<Vec<IsolatedRoot>> {
        let mut inputs = Vec::new();
        self.positive(q, stats, &mut inputs)
    }

    /// All real roots in increasing order plus the recorded refinement inputs.
    pub fn run(&self, p: &SparsePolynomial, stats: &mut Stats) -> Result<Isolation> {
        let (q, i0) = p.strip_power()?;
        let mut inputs = Vec::new();
        let mut roots: Vec<IsolatedRoot> = self
            .positive(&q.reflect(), stats, &mut inputs)?
            .into_iter()
            .rev()
            .map(|r| IsolatedRoot { interval: r.interval.negated(), ..r })
            .collect();
        if i0 > 0 {
            let m = u32::try_from(i0).map_err(|_| Error::Contract("multiplicity of 0 exceeds u32"))?;
            roots.push(IsolatedRoot { interval: RootInterval::point(Dyadic::zero()), multiplicity: m, chain_depth: m });
        }
        roots.extend(self.positive(&q, stats, &mut inputs)?);
        Ok(Isolation { roots, refine_inputs: inputs })
    }

    fn positive(&self, q: &SparsePolynomial, stats: &mut Stats, inputs: &mut Vec<RefineInput>) -> Result<Vec<IsolatedRoot>> {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if q.terms()[0].exp != 0 {
            return Err(Error::MissingConstantTerm);
        }
        if q.num_terms() == 1 {
            return Ok(Vec::new());
        }
        let chain = q.derivative_chain()?;
        let m = q.magnitude();
        let bounds = chain_bound(m.degree, m.coeff_bits, m.terms as u64)?;
        let target = self.target_bits.unwrap_or(bounds.l);
        let top = Dyadic::pow2(q.cauchy_exponent() as i64);
        let zero = Dyadic::zero();
        let mut hint = 16u64;
        let mut roots: Vec<ChainRoot> = Vec::new();
        for j in (1..chain.len()).rev() {
            let (f, g) = (&chain[j - 1], &chain[j]);
            let mut signed = Vec::with_capacity(roots.len());
            for r in roots.iter_mut() {
                let s = self.sign_for(f, g, r, &bounds, &mut hint, stats)?;
                signed.push(SignedRoot { interval: r.iv.clone(), sign: s, multiplicity: r.multiplicity });
            }
            let s0 = Sign::of(&f.constant_term());
            let s_top = certified_sign_from(f, &top, 1, exact_precision(f, &top), stats).0;
            let (states, carried) = derive_intervals(&signed, (&zero, s0), (&top, s_top))?;
            let mut next: Vec<ChainRoot> = Vec::with_capacity(states.len() + carried.len());
            for s in states {
                if self.record_inputs {
                    inputs.push(RefineInput { poly: f.clone(), level: j - 1, state: s.clone() });
                }
                if j == 1 {
                    let out = refine_root(f, s, target, stats)?;
                    next.push(chain_root_from(out));
                } else {
                    next.push(ChainRoot {
                        iv: RootInterval { lo: s.a.clone(), hi: s.b.clone() },
                        multiplicity: 1,
                        state: Some(s),
                    });
                }
            }
            for c in carried {
                next.push(ChainRoot { iv: c.interval, multiplicity: c.multiplicity, state: None });
            }
            next.sort_by(|x, y| x.iv.lo.cmp(&y.iv.lo));
            roots = next;
        }
        Ok(roots
            .into_iter()
            .map(|r| IsolatedRoot { interval: r.iv, multiplicity: r.multiplicity, chain_depth: r.multiplicity })
            .collect())
    }

    /// Sign of `f` at a root of `g`, refining that root as far as needed.
    fn sign_for(
        &self,
        f: &SparsePolynomial,
        g: &SparsePolynomial,
        r: &mut ChainRoot,
        bounds: &BoundSet,
        hint: &mut u64,
        stats: &mut Stats,
    ) -> Result<Sign> {
        let eps = Dyadic::pow2(bounds.zero_threshold_exp());
        loop {
            if r.iv.is_point() {
                return sign_at_chain_root(f, &r.iv, bounds, stats);
            }
            let w = r.iv.width();
            if w < eps {
                return sign_at_chain_root(f, &r.iv, bounds, stats);
            }
            if self.early_sign {
                if let Some(s) = interval_sign(f, &r.iv, bounds.l, hint, stats) {
                    return Ok(s);
                }
            }
            let state = r.state.take().ok_or_else(|| {
                Error::Invariant(alloc::format!("multiple chain root at {} wider than 2^-L", r.iv.lo))
            })?;
            let bits = if self.early_sign {
                let have = (-w.floor_log2().unwrap_or(0)).max(0) as u64;
                // One full Newton step if the root converges quadratically.
                let next = (have + state.speed_log).max(64);
                if 2 * next > bounds.l {
                    bounds.l
                } else {
                    next
                }
            } else {
                bounds.l
            };
            *r = chain_root_from(refine_root(g, state, bits, stats)?);
        }
    }
}

fn chain_root_from(out: RefineOutcome) -> ChainRoot {
    match out {
        RefineOutcome::Interval(s) => {
            ChainRoot { iv: RootInterval { lo: s.a.clone(), hi: s.b.clone() }, multiplicity: 1, state: Some(s) }
        }
        RefineOutcome::Point(x) => ChainRoot { iv: RootInterval::point(x), multiplicity: 1, state: None },
    }
}

/// All real roots of `p`, simple ones refined to the chain bound `L`.
pub fn isolate_all(p: &SparsePolynomial, stats: &mut Stats) -> Result<Vec<IsolatedRoot>> {
    Isolator::new().isolate_all(p, stats)
}

/// Positive roots of `q`, which must have a nonzero constant term.
pub fn isolate_positive(q: &SparsePolynomial, stats: &mut Stats) -> Result<Vec<IsolatedRoot>> {
    Isolator::new().isolate_positive(q, stats)
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

    #[test]
    fn quadratic() {
        let mut st = Stats::default();
        let roots = Isolator::new().target_bits(40).isolate_all(&p("x^2 - 2"), &mut st).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.multiplicity, 1);
            assert!(r.interval.width() < Dyadic::pow2(-40));
            let m = r.interval.midpoint().to_f64();
            assert!((m.abs() - core::f64::consts::SQRT_2).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_and_exact_roots() {
        let mut st = Stats::default();
        let roots = Isolator::new().target_bits(30).isolate_all(&p("x^5 - x^3"), &mut st).unwrap();
        let mults: Vec<u32> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, [1, 3, 1]);
        assert_eq!(roots[1].interval, RootInterval::point(Dyadic::zero()));
    }

    #[test]
    fn derive_intervals_example() {
        // Chain roots of p_1 for the golden polynomial, approximated.
        let r1 = SignedRoot {
            interval: RootInterval { lo: d("43*2^-5"), hi: d("11*2^-3") },
            sign: Sign::Positive,
            multiplicity: 1,
        };
        let r2 = SignedRoot {
            interval: RootInterval { lo: d("45*2^-5"), hi: d("23*2^-4") },
            sign: Sign::Zero,
            multiplicity: 1,
        };
        let (simple, carried) =
            derive_intervals(&[r1, r2.clone()], (&Dyadic::zero(), Sign::Negative), (&d("1*2^3"), Sign::Positive))
                .unwrap();
        assert_eq!(simple.len(), 1);
        assert_eq!((simple[0].a.clone(), simple[0].b.clone()), (Dyadic::zero(), d("43*2^-5")));
        assert_eq!(carried.len(), 1);
        assert_eq!(carried[0].interval, r2.interval);
        assert_eq!(carried[0].multiplicity, 2);
    }

    #[test]
    fn chain_root_sign_needs_narrow_interval() {
        let mut st = Stats::default();
        let b = chain_bound(2, 1, 2).unwrap();
        let iv = RootInterval { lo: d("1*2^0"), hi: d("1*2^1") };
        assert!(sign_at_chain_root(&p("x^2 - 2"), &iv, &b, &mut st).is_err());
    }

    #[test]
    fn faithful_mode_agrees() {
        for s in ["x^3 - 3x + 1", "x^4 - 5x^2 + 4", "x^3 - 3x^2 + 3x - 1"] {
            let q = p(s);
            let mut st = Stats::default();
            let fast = Isolator::new().target_bits(24).isolate_all(&q, &mut st).unwrap();
            let slow = Isolator::new().target_bits(24).early_sign(false).isolate_all(&q, &mut st).unwrap();
            assert_eq!(fast.len(), slow.len(), "{s}");
            for (x, y) in fast.iter().zip(&slow) {
                assert_eq!(x.multiplicity, y.multiplicity, "{s}");
            }
        }
    }
}
