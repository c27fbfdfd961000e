use std::collections::BTreeMap;

use knomial_core::{
    admissible_point, chain_bound, densify, eval_approx, eval_sep_bound, refine_root, sturm_isolate,
    verify_isolation, Dyadic, Isolator, MultipointSet, RefineOutcome, RefineState, Sign, SparsePolynomial, Stats,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn knomial(max_k: usize, max_n: u64, tau: u32) -> impl Strategy<Value = SparsePolynomial> {
    let lim = (1i64 << tau) - 1;
    let coeff = (1..=lim, any::<bool>()).prop_map(|(c, neg)| if neg { -c } else { c });
    prop::collection::btree_map(0..=max_n, coeff, 2..=max_k)
        .prop_map(|m: BTreeMap<u64, i64>| SparsePolynomial::from_terms(m).unwrap())
        .prop_filter("positive degree", |p| p.degree() > 0)
}

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (any::<i32>(), -24i64..6).prop_map(|(m, e)| Dyadic::new(BigInt::from(m), e))
}

fn rational(x: &Dyadic) -> BigRational {
    let (num, s) = x.as_fraction();
    BigRational::new(num, BigInt::from(1) << s)
}

fn monomial(e: u64) -> SparsePolynomial {
    SparsePolynomial::from_terms([(e, 1)]).unwrap()
}

fn bits(c: &BigInt) -> u64 {
    c.bits()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn display_round_trips(p in knomial(6, 200, 40)) {
        let q: SparsePolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn chain_members_lose_one_term(p in knomial(6, 64, 16)) {
        let (q, _) = p.strip_power().unwrap();
        let chain = q.derivative_chain().unwrap();
        prop_assert_eq!(chain.len(), q.num_terms());
        prop_assert_eq!(chain.last().unwrap().degree(), 0);
        for w in chain.windows(2) {
            prop_assert_eq!(w[1].num_terms() + 1, w[0].num_terms());
            prop_assert!(w[1].constant_term() != BigInt::from(0));
            let g = w[0].terms().iter().map(|t| t.exp).find(|&e| e > 0).unwrap();
            prop_assert_eq!(w[1].mul(&monomial(g - 1)), w[0].derivative());
        }
    }

    #[test]
    fn chain_coefficients_fit_the_bound(p in knomial(6, 64, 16)) {
        let (q, _) = p.strip_power().unwrap();
        let n = q.degree();
        let tau = q.terms().iter().map(|t| bits(&t.coeff)).max().unwrap();
        let ln = 64 - n.leading_zeros() as u64;
        for (j, f) in q.derivative_chain().unwrap().iter().enumerate() {
            let b = f.terms().iter().map(|t| bits(&t.coeff)).max().unwrap();
            prop_assert!(b <= tau + j as u64 * ln);
        }
        let k = q.num_terms() as u64;
        let ceil = (n + 1).next_power_of_two().trailing_zeros() as u64;
        prop_assert_eq!(chain_bound(n, tau, k).unwrap(), eval_sep_bound(n, tau + k * ceil).unwrap());
    }

    #[test]
    fn reflect_is_an_involution(p in knomial(6, 64, 16), x in dyadic()) {
        prop_assert_eq!(p.reflect().reflect(), p.clone());
        prop_assert_eq!(p.reflect().eval_exact(&x), p.eval_exact(&-&x));
    }

    #[test]
    fn exact_eval_matches_dense_horner(p in knomial(6, 64, 16), x in dyadic()) {
        let dense = densify(&p, 4096).unwrap();
        prop_assert_eq!(rational(&p.eval_exact(&x)), dense.value_at(&x));
    }

    #[test]
    fn approx_error_is_bounded(p in knomial(6, 300, 32), x in dyadic(), k in 1u64..200) {
        let mut stats = Stats::default();
        let v = eval_approx(&p, &x, k, &mut stats);
        let err = (&v.approx - &p.eval_exact(&x)).abs();
        prop_assert!(err < Dyadic::pow2(-(k as i64)));
    }

    #[test]
    fn admissible_inequalities(p in knomial(6, 64, 16), c in dyadic(), s in 1i64..30) {
        let m = MultipointSet::new(c, Dyadic::pow2(-s), p.num_terms()).unwrap();
        let mut stats = Stats::default();
        let Ok(a) = admissible_point(&p, &m, &mut stats) else {
            prop_assert!(m.points().iter().all(|x| p.sign_exact(x) == Sign::Zero));
            return Ok(());
        };
        let vals: Vec<Dyadic> = m.points().iter().map(|x| p.eval_exact(x).abs()).collect();
        let max = vals.iter().max().unwrap().clone();
        let at = p.eval_exact(&a.point).abs();
        prop_assert_eq!(&m.point(a.index), &a.point);
        prop_assert!(at.mul_pow2(2) >= max);
        prop_assert!(at >= Dyadic::pow2(a.t - 1));
        prop_assert!(max <= Dyadic::pow2(a.t + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isolation_agrees_with_oracle(p in knomial(6, 48, 16)) {
        let mut stats = Stats::default();
        let roots = Isolator::new().target_bits(32).isolate_all(&p, &mut stats).unwrap();
        let report = verify_isolation(&p, &roots).unwrap();
        prop_assert!(report.passed(), "{:?}", report.diagnostics);
        for r in &roots {
            prop_assert!(r.interval.is_point() || r.interval.width() < Dyadic::pow2(-32) || r.multiplicity > 1);
            if !r.interval.lo.is_zero() || !r.interval.hi.is_zero() {
                prop_assert!(r.multiplicity < p.num_terms() as u32);
            }
        }
        for w in roots.windows(2) {
            prop_assert!(w[0].interval.hi < w[1].interval.lo);
        }
    }

    #[test]
    fn descartes_bounds(p in knomial(6, 48, 16)) {
        let oracle = sturm_isolate(&p).unwrap();
        let pos = oracle.positive_multiplicity();
        let var = p.sign_variations() as u64;
        prop_assert!(pos <= var && (var - pos).is_multiple_of(2), "pos {pos} var {var}");
        prop_assert!(oracle.roots.len() < 2 * p.num_terms());
    }

    #[test]
    fn reflection_mirrors_roots(p in knomial(5, 40, 12)) {
        let mut stats = Stats::default();
        let iso = Isolator::new().target_bits(24);
        let a = iso.isolate_all(&p, &mut stats).unwrap();
        let b = iso.isolate_all(&p.reflect(), &mut stats).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter().rev()) {
            prop_assert_eq!(x.multiplicity, y.multiplicity);
            let ny = y.interval.negated();
            prop_assert!(x.interval.lo <= ny.hi && ny.lo <= x.interval.hi);
        }
    }

    #[test]
    fn refinement_nests(p in knomial(5, 40, 12), extra in 8u64..80) {
        let mut stats = Stats::default();
        let roots = Isolator::new().target_bits(8).isolate_all(&p, &mut stats).unwrap();
        for r in roots.iter().filter(|r| r.multiplicity == 1 && !r.interval.is_point()) {
            let (lo, hi) = (r.interval.lo.clone(), r.interval.hi.clone());
            let s = RefineState::new(lo.clone(), hi.clone(), p.sign_exact(&lo), p.sign_exact(&hi)).unwrap();
            match refine_root(&p, s, 8 + extra, &mut stats).unwrap() {
                RefineOutcome::Point(x) => {
                    prop_assert!(lo < x && x < hi);
                    prop_assert_eq!(p.sign_exact(&x), Sign::Zero);
                }
                RefineOutcome::Interval(t) => {
                    prop_assert!(lo <= t.a && t.b <= hi);
                    prop_assert!(t.width() < Dyadic::pow2(-((8 + extra) as i64)));
                    prop_assert!(p.sign_exact(&t.a).opposes(p.sign_exact(&t.b)));
                }
            }
        }
    }
}
