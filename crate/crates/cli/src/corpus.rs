//! Seeded random k-nomials.

use std::collections::BTreeSet;

use knomial_core::{RationalTerm, SparsePolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` distinct exponents in `0..=n`, always including `n`.
pub fn exponents<R: Rng>(rng: &mut R, k: usize, n: u64) -> Vec<u64> {
    assert!(k >= 1 && (k as u64) <= n + 1);
    let mut set = BTreeSet::from([n]);
    if n < 4096 {
        for i in sample(rng, n as usize, k - 1) {
            set.insert(i as u64);
        }
    } else {
        while set.len() < k {
            set.insert(rng.gen_range(0..n));
        }
    }
    set.into_iter().collect()
}

/// Nonzero integer with `|c| < 2^tau`.
pub fn coefficient<R: Rng>(rng: &mut R, tau: u32) -> BigInt {
    let mag = BigInt::from(rng.gen_range(1..(1u64 << tau.clamp(1, 63))));
    if rng.gen() {
        -mag
    } else {
        mag
    }
}

/// A random k-nomial of degree exactly `n` with coefficients below `2^tau`.
pub fn knomial<R: Rng>(rng: &mut R, k: usize, n: u64, tau: u32) -> SparsePolynomial {
    let terms: Vec<(u64, BigInt)> = exponents(rng, k, n).into_iter().map(|e| (e, coefficient(rng, tau))).collect();
    SparsePolynomial::from_terms(terms).expect("exponents are in range")
}

/// Same shape with rational coefficients, denominators in `1..=2^den_bits`.
pub fn rational_knomial<R: Rng>(rng: &mut R, k: usize, n: u64, tau: u32, den_bits: u32) -> Vec<RationalTerm> {
    exponents(rng, k, n)
        .into_iter()
        .map(|exp| {
            let den = BigInt::from(rng.gen_range(1..=(1u64 << den_bits)));
            RationalTerm { exp, coeff: BigRational::new(coefficient(rng, tau), den) }
        })
        .collect()
}

/// Parameters of the verification corpus: `k` in `2..=max_k`, degree up to
/// `max_n`, coefficient bits up to `max_tau`.
#[derive(Clone, Copy, Debug)]
pub struct CorpusShape {
    pub max_k: usize,
    pub max_n: u64,
    pub max_tau: u32,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape { max_k: 6, max_n: 64, max_tau: 16 }
    }
}

/// `count` polynomials drawn from `shape`, reproducible from `seed`.
pub fn corpus(seed: u64, count: usize, shape: CorpusShape) -> Vec<SparsePolynomial> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let k = r.gen_range(2..=shape.max_k);
            let n = r.gen_range((k as u64 - 1).max(1)..=shape.max_n);
            let tau = r.gen_range(1..=shape.max_tau);
            knomial(&mut r, k, n, tau)
        })
        .collect()
}

/// Rational counterpart of [`corpus`].
pub fn rational_corpus(seed: u64, count: usize, shape: CorpusShape) -> Vec<Vec<RationalTerm>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let k = r.gen_range(2..=shape.max_k);
            let n = r.gen_range((k as u64 - 1).max(1)..=shape.max_n);
            let tau = r.gen_range(1..=shape.max_tau);
            rational_knomial(&mut r, k, n, tau, 8)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_reproducibility() {
        let a = corpus(7, 50, CorpusShape::default());
        assert_eq!(a, corpus(7, 50, CorpusShape::default()));
        for p in &a {
            assert!((2..=6).contains(&p.num_terms()));
            assert!(p.degree() <= 64 && p.degree() >= 1);
            assert!(p.terms().iter().all(|t| t.coeff.bits() <= 16));
        }
        let big = knomial(&mut rng(1), 4, 1 << 20, 8);
        assert_eq!(big.degree(), 1 << 20);
        assert_eq!(big.num_terms(), 4);
    }
}
