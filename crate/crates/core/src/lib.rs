//! Certified real-root isolation for sparse integer polynomials.
//!
//! A polynomial with `k` nonzero terms is handled through its chain of
//! "sparse derivatives" `p_0 = p, p_j = x^(1-g) p_{j-1}'`, each of which has
//! one term fewer than its predecessor. The real roots of `p_{j-1}` are
//! recovered from those of `p_j` by sign inspection at the roots of `p_j`
//! and refinement of the gaps in between. Refinement combines a Newton step
//! with quadratic convergence, a boundary step and a bisection fallback,
//! all driven by approximate evaluation at carefully chosen points.
//!
//! The crate is `no_std` (with `alloc`). IO and the command-line front end
//! live in the companion `knomial` crate.
//!
//! ```
//! use knomial_core::{isolate_all, SparsePolynomial, Stats};
//!
//! let p: SparsePolynomial = "x^3 - 2x".parse().unwrap();
//! let mut stats = Stats::default();
//! let roots = knomial_core::Isolator::new().target_bits(32).isolate_all(&p, &mut stats).unwrap();
//! assert_eq!(roots.len(), 3);
//! # let _ = isolate_all;
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod isolate;
pub mod numeric;
pub mod oracle;
mod parse;
pub mod poly;
pub mod refine;
mod stats;

pub use error::Error;
pub use isolate::{
    derive_intervals, isolate_all, isolate_positive, sign_at_chain_root, IsolatedRoot, Isolation,
    Isolator, RefineInput, RootInterval, SignedRoot,
};
pub use numeric::{
    admissible_point, certified_sign, chain_bound, eval_approx, eval_sep_bound, AdmissiblePoint,
    ApproxValue, BoundSet, Dyadic, MultipointSet, Sign,
};
pub use oracle::{
    densify, square_free_decomposition, sturm_isolate, verify_isolation, DensePolynomial, OracleRoot, OracleRoots,
    VerifyReport,
};
pub use parse::{clear_denominators, parse_rational_terms, RationalTerm};
pub use poly::{Magnitude, SparsePolynomial, Term, MAX_EXPONENT};
pub use refine::{refine_all, refine_root, RefineOutcome, RefineState};
pub use stats::Stats;

pub type Result<T> = core::result::Result<T, Error>;
