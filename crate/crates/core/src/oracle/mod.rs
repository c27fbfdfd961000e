//! Independent reference for real roots of small-degree polynomials.
//!
//! Works on dense integer polynomials: Yun's square-free decomposition,
//! Sturm sequences and bisection with exact sign counts at dyadic points.
//! Nothing here goes through the approximate evaluation used by the main
//! algorithm, so the two can check each other.

mod dense;

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use dense::{densify, DensePolynomial};
use dense::{from_q, q_derivative, q_div, q_sub};

use crate::isolate::IsolatedRoot;
use crate::numeric::{Dyadic, Sign};
use crate::poly::SparsePolynomial;
use crate::{Error, Result};

/// Degree cap for dense expansion in verification.
pub const DENSE_CAP: u64 = 4096;

/// `f = c * prod f_i^i` with square-free, pairwise coprime `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactor {
    pub factor: DensePolynomial,
    pub multiplicity: u32,
}

/// Yun's algorithm. Constant factors are omitted.
pub fn square_free_decomposition(f: &DensePolynomial) -> Vec<SquarefreeFactor> {
    if f.degree() <= 0 {
        return Vec::new();
    }
    let f = f.primitive();
    let df = f.derivative();
    let a0 = f.gcd(&df).to_q();
    let mut b = q_div(&f.to_q(), &a0);
    let c = q_div(&df.to_q(), &a0);
    let mut d = q_sub(&c, &q_derivative(&b));
    let mut out = Vec::new();
    let mut i = 1u32;
    while b.len() > 1 {
        let bz = from_q(&b);
        let a = if d.is_empty() { bz.clone() } else { bz.gcd(&from_q(&d)) };
        let aq = a.to_q();
        if a.degree() > 0 {
            out.push(SquarefreeFactor { factor: a, multiplicity: i });
        }
        let nb = q_div(&b, &aq);
        let c = q_div(&d, &aq);
        d = q_sub(&c, &q_derivative(&nb));
        b = nb;
        i += 1;
    }
    out
}

/// Sturm sequence `f, f', -rem(...), ...`, each term scaled by a positive constant.
pub fn sturm_sequence(f: &DensePolynomial) -> Vec<DensePolynomial> {
    let mut seq = vec![f.primitive(), f.derivative().primitive()];
    loop {
        let n = seq.len();
        if seq[n - 1].degree() <= 0 {
            break;
        }
        let r = seq[n - 2].prem_positive(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let neg = DensePolynomial { coeffs: r.coeffs.iter().map(|c| -c).collect() }.primitive();
        seq.push(neg);
    }
    seq
}

/// Sign changes of the sequence at `num / 2^s`, zeros skipped.
pub fn sign_variations_at(seq: &[DensePolynomial], num: &BigInt, s: u64) -> usize {
    let mut last = Sign::Zero;
    let mut v = 0;
    for p in seq {
        let sg = p.sign_at(num, s);
        if sg == Sign::Zero {
            continue;
        }
        if last.opposes(sg) {
            v += 1;
        }
        last = sg;
    }
    v
}

/// A real root found by the oracle: an open interval or an exact point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRoot {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub multiplicity: u32,
    /// Index into the square-free factors.
    pub factor: usize,
}

impl OracleRoot {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Real roots of a dense polynomial with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRoots {
    pub factors: Vec<SquarefreeFactor>,
    pub roots: Vec<OracleRoot>,
}

impl OracleRoots {
    pub fn compute(f: &DensePolynomial) -> Result<OracleRoots> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let factors = square_free_decomposition(f);
        let mut roots = Vec::new();
        if f.degree() <= 0 {
            return Ok(OracleRoots { factors, roots });
        }
        let sqf = factors.iter().fold(DensePolynomial::new(vec![BigInt::one()]), |acc, fa| mul(&acc, &fa.factor));
        let seq = sturm_sequence(&sqf);
        let maxc = f.coeffs.iter().map(|c| c.abs()).max().unwrap();
        let e = maxc.bits() as i64 + 1;
        // Roots in the open interval (lo, hi).
        let count = |lo: &Dyadic, hi: &Dyadic| {
            let (a, sa) = lo.as_fraction();
            let (b, sb) = hi.as_fraction();
            let half_open = sign_variations_at(&seq, &a, sa) - sign_variations_at(&seq, &b, sb);
            half_open - usize::from(sqf.sign_at(&b, sb) == Sign::Zero)
        };
        // Splitting at 0 first keeps every interval on one side of it.
        let mut stack = vec![(-Dyadic::pow2(e), Dyadic::zero()), (Dyadic::zero(), Dyadic::pow2(e))];
        let mut found: Vec<(Dyadic, Dyadic)> = Vec::new();
        if sqf.sign_at_dyadic(&Dyadic::zero()) == Sign::Zero {
            found.push((Dyadic::zero(), Dyadic::zero()));
        }
        while let Some((lo, hi)) = stack.pop() {
            let c = count(&lo, &hi);
            if c == 0 {
                continue;
            }
            let clean_ends = sqf.sign_at_dyadic(&lo) != Sign::Zero && sqf.sign_at_dyadic(&hi) != Sign::Zero;
            if c == 1 && clean_ends {
                found.push((lo, hi));
                continue;
            }
            let mid = Dyadic::midpoint(&lo, &hi);
            if sqf.sign_at_dyadic(&mid) == Sign::Zero {
                found.push((mid.clone(), mid.clone()));
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        found.sort_by(|x, y| x.0.cmp(&y.0));
        for (lo, hi) in found {
            let idx = factors.iter().position(|fa| {
                if lo == hi {
                    fa.factor.sign_at_dyadic(&lo) == Sign::Zero
                } else {
                    fa.factor.sign_at_dyadic(&lo).opposes(fa.factor.sign_at_dyadic(&hi))
                }
            });
            let Some(idx) = idx else {
                return Err(Error::Invariant(format!("no square-free factor owns root in ({lo}, {hi})")));
            };
            roots.push(OracleRoot { lo, hi, multiplicity: factors[idx].multiplicity, factor: idx });
        }
        Ok(OracleRoots { factors, roots })
    }

    /// Number of real roots counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity as u64).sum()
    }

    /// Roots in `(0, inf)` counted with multiplicity.
    pub fn positive_multiplicity(&self) -> u64 {
        self.roots.iter().filter(|r| r.lo >= Dyadic::zero() && r.hi > Dyadic::zero()).map(|r| r.multiplicity as u64).sum()
    }
}

fn mul(a: &DensePolynomial, b: &DensePolynomial) -> DensePolynomial {
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    DensePolynomial::new(out)
}

/// Oracle roots of a sparse integer polynomial.
pub fn sturm_isolate(p: &SparsePolynomial) -> Result<OracleRoots> {
    OracleRoots::compute(&densify(p, DENSE_CAP)?)
}

/// Outcome of checking claimed roots against the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    /// Same number of distinct roots, matched one to one.
    pub count_match: bool,
    /// Matched roots have equal multiplicities.
    pub multiplicity_match: bool,
    /// Every claimed interval contains exactly one true root.
    pub containment: bool,
    /// Claimed intervals are sorted and pairwise disjoint.
    pub disjointness: bool,
    pub diagnostics: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.count_match && self.multiplicity_match && self.containment && self.disjointness
    }
}

fn disjoint(a: &IsolatedRoot, b: &IsolatedRoot) -> bool {
    let (x, y) = (&a.interval, &b.interval);
    x.hi < y.lo || (x.hi == y.lo && !(x.is_point() && y.is_point()))
}

/// Whether oracle root `r` lies in the claimed interval.
fn claim_contains(claim: &IsolatedRoot, r: &OracleRoot, factors: &[SquarefreeFactor]) -> bool {
    let iv = &claim.interval;
    let f = &factors[r.factor].factor;
    if iv.is_point() {
        let x = &iv.lo;
        return if r.is_point() { &r.lo == x } else { &r.lo < x && x < &r.hi && f.sign_at_dyadic(x) == Sign::Zero };
    }
    if r.is_point() {
        return iv.lo < r.lo && r.lo < iv.hi;
    }
    let lo = if iv.lo > r.lo { &iv.lo } else { &r.lo };
    let hi = if iv.hi < r.hi { &iv.hi } else { &r.hi };
    if lo >= hi {
        return false;
    }
    f.sign_at_dyadic(lo).opposes(f.sign_at_dyadic(hi))
}

/// Checks claimed isolating intervals of `p` against the oracle.
pub fn verify_isolation(p: &SparsePolynomial, claimed: &[IsolatedRoot]) -> Result<VerifyReport> {
    let oracle = sturm_isolate(p)?;
    let mut rep = VerifyReport { disjointness: true, containment: true, multiplicity_match: true, ..Default::default() };
    for (i, w) in claimed.windows(2).enumerate() {
        if !disjoint(&w[0], &w[1]) {
            rep.disjointness = false;
            rep.diagnostics.push(format!("claims {i} and {} overlap or are out of order", i + 1));
        }
    }
    let mut hits = vec![0usize; oracle.roots.len()];
    for (ci, c) in claimed.iter().enumerate() {
        let inside: Vec<usize> =
            (0..oracle.roots.len()).filter(|&ri| claim_contains(c, &oracle.roots[ri], &oracle.factors)).collect();
        if inside.len() != 1 {
            rep.containment = false;
            rep.diagnostics.push(format!("claim {ci} contains {} true roots", inside.len()));
            continue;
        }
        let ri = inside[0];
        hits[ri] += 1;
        if oracle.roots[ri].multiplicity != c.multiplicity {
            rep.multiplicity_match = false;
            rep.diagnostics.push(format!(
                "claim {ci} has multiplicity {}, true root has {}",
                c.multiplicity, oracle.roots[ri].multiplicity
            ));
        }
    }
    rep.count_match = claimed.len() == oracle.roots.len() && hits.iter().all(|&h| h == 1);
    if !rep.count_match {
        rep.diagnostics.push(format!("{} claims for {} distinct real roots", claimed.len(), oracle.roots.len()));
    }
    Ok(rep)
}
