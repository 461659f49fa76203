//! The model contract and the plateau-safe likelihood ordering.

use std::cmp::Ordering;

use crate::rng::Rng;

/// A log-likelihood paired with a tiebreaker in `[0, 1)`.
///
/// Values compare lexicographically, so regions where the likelihood is flat
/// are still strictly ordered by the tiebreaker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodValue {
    pub log_l: f64,
    pub tiebreaker: f64,
}

impl LikelihoodValue {
    pub fn new(log_l: f64, tiebreaker: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&tiebreaker) || tiebreaker.is_nan());
        LikelihoodValue { log_l, tiebreaker }
    }
}

impl PartialOrd for LikelihoodValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.log_l.partial_cmp(&other.log_l)? {
            Ordering::Equal => self.tiebreaker.partial_cmp(&other.tiebreaker),
            ord => Some(ord),
        }
    }
}

impl LikelihoodValue {
    /// Total order for sorting; NaN never reaches the sampler, but sorting
    /// must not panic on it either.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.log_l
            .total_cmp(&other.log_l)
            .then(self.tiebreaker.total_cmp(&other.tiebreaker))
    }
}

/// A problem for the sampler: a prior over `Params`, a proposal consistent
/// with it, and a likelihood.
///
/// Implementations are shared read-only across worker threads; all mutable
/// state lives in `Params` values owned by particles.
pub trait Model: Sync {
    type Params: Clone + Send;

    /// An independent draw from the prior.
    fn from_prior(&self, rng: &mut Rng) -> Self::Params;

    /// Proposes a new point and returns it with
    /// `ln H = ln[q(θ|θ') π(θ') / (q(θ'|θ) π(θ))]`. Return `-inf` for a
    /// proposal that must be rejected.
    fn perturb(&self, params: &Self::Params, rng: &mut Rng) -> (Self::Params, f64);

    /// Log-likelihood in nats, or `-inf` for zero likelihood. NaN aborts the run.
    fn log_likelihood(&self, params: &Self::Params) -> f64;

    /// The printed fields of a point. The count must not depend on `params`.
    fn print(&self, params: &Self::Params) -> Vec<f64>;

    /// Comma-separated names of the fields produced by [`Model::print`].
    fn description(&self) -> String;
}

/// Formats a real so that parsing it gives back the same `f64`.
///
/// Very large and very small magnitudes use exponent notation (`-1e308`)
/// instead of a long run of digits.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && x.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Space-delimited line of reals, as written to `sample.txt`.
pub fn format_fields(fields: &[f64]) -> String {
    let mut line = String::with_capacity(fields.len() * 12);
    for (i, &x) in fields.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        line.push_str(&format_real(x));
    }
    line
}
