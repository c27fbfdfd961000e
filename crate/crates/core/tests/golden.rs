use knomial_core::refine::{bisect_step, refine_root_traced};
use knomial_core::{
    admissible_point, certified_sign, chain_bound, clear_denominators, densify, eval_approx, eval_sep_bound,
    parse_rational_terms, refine_root, sturm_isolate, Dyadic, Isolator, MultipointSet, RefineOutcome, RefineState,
    Sign, SparsePolynomial, Stats,
};
use num_bigint::BigInt;

const GOLDEN: &str = "x^50 - 4*x^48 + 4*x^46 - x^4 + 4*x^2 - 4";

fn poly(s: &str) -> SparsePolynomial {
    s.parse().unwrap()
}

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

#[test]
fn golden_chain() {
    let chain = poly(GOLDEN).derivative_chain().unwrap();
    let want = [
        GOLDEN,
        "50x^48 - 192x^46 + 184x^44 - 4x^2 + 8",
        "2400x^46 - 8832x^44 + 8096x^42 - 8",
        "110400x^4 - 388608x^2 + 340032",
        "441600x^2 - 777216",
        "883200",
    ];
    assert_eq!(chain.len(), want.len());
    for (got, w) in chain.iter().zip(want) {
        assert_eq!(got, &poly(w));
    }
}

#[test]
fn golden_roots_match_factorization() {
    let p = poly(GOLDEN);
    let factored = poly("x^2 - 2").mul(&poly("x^2 - 2")).mul(&poly("x^46 - 1"));
    assert_eq!(p, factored);

    let mut stats = Stats::default();
    let roots = Isolator::new().target_bits(64).isolate_all(&p, &mut stats).unwrap();
    let mults: Vec<u32> = roots.iter().map(|r| r.multiplicity).collect();
    assert_eq!(mults, [2, 1, 1, 2]);

    // -sqrt2, -1, 1, sqrt2
    let f = |r: &knomial_core::IsolatedRoot| (r.interval.lo.to_f64(), r.interval.hi.to_f64());
    let want = [-std::f64::consts::SQRT_2, -1.0, 1.0, std::f64::consts::SQRT_2];
    for (r, w) in roots.iter().zip(want) {
        let (lo, hi) = f(r);
        assert!(lo - 1e-12 <= w && w <= hi + 1e-12, "{w} not in [{lo}, {hi}]");
        if r.multiplicity == 1 {
            let lo = &r.interval.lo;
            let hi = &r.interval.hi;
            assert!(lo == hi && p.sign_exact(lo) == Sign::Zero || p.sign_exact(lo).opposes(p.sign_exact(hi)));
        } else {
            let x2 = poly("x^2 - 2");
            assert!(x2.sign_exact(&r.interval.lo).opposes(x2.sign_exact(&r.interval.hi)));
        }
    }

    let oracle = sturm_isolate(&p).unwrap();
    assert_eq!(oracle.roots.len(), 4);
    assert_eq!(oracle.total_multiplicity(), 6);
}

#[test]
fn parse_examples() {
    let p = poly("x^2 - 2");
    let terms: Vec<(u64, BigInt)> = p.terms().iter().map(|t| (t.exp, t.coeff.clone())).collect();
    assert_eq!(terms, [(0, BigInt::from(-2)), (2, BigInt::from(1))]);
    assert_eq!(poly(GOLDEN).num_terms(), 6);
    assert!(poly("x + x - 2*x").is_zero());
}

#[test]
fn strip_and_reflect_examples() {
    assert_eq!(poly("x^3").strip_power().unwrap(), (poly("1"), 3));
    assert_eq!(poly(GOLDEN).strip_power().unwrap(), (poly(GOLDEN), 0));
    assert_eq!(poly("2x^5 + 6x^2").strip_power().unwrap(), (poly("2x^3 + 6"), 2));
    assert_eq!(poly("x^2 - 2").reflect(), poly("x^2 - 2"));
    assert_eq!(poly("x^3 - 3x + 1").reflect(), poly("-x^3 + 3x + 1"));
}

#[test]
fn clear_denominators_examples() {
    let p = clear_denominators(&parse_rational_terms("1/2x^2 - 1/3").unwrap()).unwrap();
    assert_eq!(p, poly("3x^2 - 2"));
    let p = clear_denominators(&parse_rational_terms("1/2x - 1/2").unwrap()).unwrap();
    assert_eq!(p, poly("x - 1"));
    assert_eq!(p.sign_exact(&Dyadic::one()), Sign::Zero);
    let p = clear_denominators(&parse_rational_terms(GOLDEN).unwrap()).unwrap();
    assert_eq!(p, poly(GOLDEN));
}

#[test]
fn chain_step_examples() {
    assert_eq!(poly(GOLDEN).next_in_chain().unwrap(), poly("50x^48 - 192x^46 + 184x^44 - 4x^2 + 8"));
    assert_eq!(poly("x^2 - 1").next_in_chain().unwrap(), poly("2"));
    assert_eq!(poly("x^3 - 3x + 1").next_in_chain().unwrap(), poly("3x^2 - 3"));
    assert_eq!(poly("x^2 - 1").derivative_chain().unwrap(), [poly("x^2 - 1"), poly("2")]);
}

#[test]
fn scalar_examples() {
    assert_eq!(poly(GOLDEN).cauchy_exponent(), 3);
    assert_eq!(poly("x - 1").cauchy_exponent(), 2);
    let hard = poly("x^512 - 18446744073709551616x^4 + 25769803776x^2 - 9");
    assert_eq!(hard.cauchy_exponent(), 65);

    assert_eq!(poly(GOLDEN).sign_variations(), 5);
    assert_eq!(poly("x^2 - 2").sign_variations(), 1);
    assert_eq!(poly("7x^9").sign_variations(), 0);

    assert!(poly(GOLDEN).eval_exact(&Dyadic::one()).is_zero());
    assert_eq!(poly("x^2 - 2").eval_exact(&d("3*2^-1")), d("1*2^-2"));
    let at2 = poly(GOLDEN).eval_exact(&Dyadic::from_int(2));
    assert_eq!(at2, Dyadic::from_int((BigInt::from(1) << 48) - 4));
    let dense = densify(&poly(GOLDEN), 4096).unwrap().value_at(&Dyadic::from_int(2));
    assert_eq!(dense, num_rational::BigRational::from_integer((BigInt::from(1) << 48) - 4));
}

#[test]
fn evaluation_examples() {
    let mut stats = Stats::default();
    let v = eval_approx(&poly("x^2 - 2"), &d("3*2^-1"), 10, &mut stats);
    assert!((&v.approx - &d("1*2^-2")).abs() < Dyadic::pow2(-10));

    let chain = poly(GOLDEN).derivative_chain().unwrap();
    // x_{4,1} = sqrt(777216/441600)
    let x41 = d("21735*2^-14");
    let v = eval_approx(&chain[3], &x41, 8, &mut stats).approx.to_f64();
    assert!((-1960.0..-1930.0).contains(&v), "{v}");

    assert_eq!(certified_sign(&poly("x^2 - 2"), &Dyadic::from_int(2), 64, &mut stats), Sign::Positive);
    assert_eq!(certified_sign(&poly("x^2 - 1"), &Dyadic::one(), 64, &mut stats), Sign::Zero);
    assert_eq!(certified_sign(&chain[4], &Dyadic::from_int(8), 64, &mut stats), Sign::Positive);
    assert_eq!(certified_sign(&chain[4], &Dyadic::zero(), 64, &mut stats), Sign::Negative);
}

#[test]
fn admissible_examples() {
    let mut stats = Stats::default();
    let m = MultipointSet::new(Dyadic::one(), d("1*2^-2"), 2).unwrap();
    assert_eq!(m.points(), [d("3*2^-2"), Dyadic::one(), d("5*2^-2")]);
    let a = admissible_point(&poly("x"), &m, &mut stats).unwrap();
    assert_eq!(a.point, d("5*2^-2"));
    assert_eq!(a.t, 0);

    let flat = MultipointSet::new(Dyadic::one(), Dyadic::zero(), 2).unwrap();
    assert_eq!(admissible_point(&poly("x - 1"), &flat, &mut stats), Err(knomial_core::Error::DegenerateMultipoint));
}

#[test]
fn bound_examples() {
    assert_eq!(eval_sep_bound(2, 1).unwrap().l, 768);
    assert_eq!(eval_sep_bound(50, 2).unwrap().l, 51200);
    assert_eq!(eval_sep_bound(1, 1).unwrap().l, 256);
    assert_eq!(chain_bound(50, 2, 6).unwrap().l, 281600);
    assert_eq!(chain_bound(1, 5, 3).unwrap().l, 128 * (5 + 4));
    assert_eq!(chain_bound(100, 3, 1).unwrap().l, 128 * 100 * (3 + 2 * 7));
}

#[test]
fn bisection_examples() {
    let mut stats = Stats::default();
    let p = poly("x^2 - 2");
    let s = RefineState::new(Dyadic::one(), Dyadic::from_int(2), Sign::Negative, Sign::Positive).unwrap();
    let (a, b) = bisect_step(&p, &s, &mut stats).unwrap().bounds();
    assert!(a.to_f64() < std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 < b.to_f64());
    assert!(&b - &a < d("3*2^-2"));

    let p = poly("x^2 - 1");
    let s = RefineState::new(Dyadic::zero(), Dyadic::from_int(2), Sign::Negative, Sign::Positive).unwrap();
    match bisect_step(&p, &s, &mut stats).unwrap() {
        RefineOutcome::Point(x) => assert_eq!(x, Dyadic::one()),
        RefineOutcome::Interval(t) => {
            assert!(t.a < Dyadic::one() && Dyadic::one() < t.b);
        }
    }
}

#[test]
fn refine_examples() {
    let mut stats = Stats::default();
    let p = poly("x^2 - 2");
    let s = RefineState::new(Dyadic::one(), Dyadic::from_int(2), Sign::Negative, Sign::Positive).unwrap();
    let (a, b) = refine_root(&p, s, 10, &mut stats).unwrap().bounds();
    assert!(&b - &a < Dyadic::pow2(-10));
    let s = RefineState::new(Dyadic::one(), Dyadic::from_int(2), Sign::Negative, Sign::Positive).unwrap();
    let (a, _) = refine_root(&p, s, 30, &mut stats).unwrap().bounds();
    assert!(a.to_decimal(8).starts_with("1.414213"), "{}", a.to_decimal(8));
    assert!(p.sign_exact(&a) == Sign::Negative && p.sign_exact(&b) == Sign::Positive);

    let p4 = poly("441600x^2 - 777216");
    let s = RefineState::new(Dyadic::zero(), Dyadic::from_int(8), Sign::Negative, Sign::Positive).unwrap();
    let (a, b) = refine_root(&p4, s, 20, &mut stats).unwrap().bounds();
    assert!((a.to_f64() - 1.326).abs() < 1e-3 && (b.to_f64() - 1.326).abs() < 1e-3);

    let narrow = RefineState::new(Dyadic::one(), d("1025*2^-10"), Sign::Negative, Sign::Positive).unwrap();
    let q = poly("1024x - 1025");
    let (out, trace) = refine_root_traced(&q, narrow.clone(), 8, &mut stats).unwrap();
    assert!(trace.is_empty());
    assert_eq!(out, RefineOutcome::Interval(narrow));
}

#[test]
fn hard_instance_cluster() {
    let p = poly("x^512 - 18446744073709551616x^4 + 25769803776x^2 - 9");
    let mut stats = Stats::default();
    let roots = Isolator::new().target_bits(129).isolate_positive(&p, &mut stats).unwrap();
    assert_eq!(roots.len(), 3);
    let cluster: Vec<_> = roots.iter().filter(|r| r.interval.hi < Dyadic::pow2(-10)).collect();
    assert_eq!(cluster.len(), 2);
    for r in cluster {
        assert_eq!(r.multiplicity, 1);
        assert!(r.interval.width() < Dyadic::pow2(-128));
        assert!(p.sign_exact(&r.interval.lo).opposes(p.sign_exact(&r.interval.hi)));
    }
}
