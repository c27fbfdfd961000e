/// Work counters threaded through evaluation, refinement and isolation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Polynomial evaluations at a single point and precision.
    pub evaluations: u64,
    /// Iterations of the refinement loop.
    pub refinement_iterations: u64,
    /// Largest working precision (mantissa bits) used by any evaluation.
    pub max_precision_bits: u64,
    pub newton_steps: u64,
    pub boundary_steps: u64,
    pub bisection_steps: u64,
}

impl Stats {
    pub(crate) fn eval(&mut self, prec: u64) {
        self.evaluations += 1;
        if prec > self.max_precision_bits {
            self.max_precision_bits = prec;
        }
    }

    /// Adds the counters of `other` into `self`.
    pub fn absorb(&mut self, other: &Stats) {
        self.evaluations += other.evaluations;
        self.refinement_iterations += other.refinement_iterations;
        self.max_precision_bits = self.max_precision_bits.max(other.max_precision_bits);
        self.newton_steps += other.newton_steps;
        self.boundary_steps += other.boundary_steps;
        self.bisection_steps += other.bisection_steps;
    }
}
