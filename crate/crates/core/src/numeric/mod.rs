//! Exact dyadics, certified approximate evaluation and precision bounds.

mod ball;
mod bounds;
mod dyadic;
mod eval;
mod mag;
mod multipoint;

pub use ball::Ball;
pub use bounds::{chain_bound, eval_sep_bound, BoundSet};
pub use dyadic::{Dyadic, Sign};
pub use eval::{
    certified_sign, certified_sign_from, default_sign_cap, eval_approx, eval_ball, eval_balls, exact_precision,
    guard_bits, ApproxValue,
};
pub use mag::Mag;
pub use multipoint::{admissible_point, admissible_point_from, AdmissiblePoint, MultipointSet};
