use std::path::Path;
use std::sync::Arc;

use crate::data::{load_shared, Dataset};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::rng::{wrap, Rng};

/// A point in joint (parameter, simulated data) space: the simulated datum
/// `i` is `mu + exp(log_sigma) * n[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcNormalParams {
    pub mu: f64,
    pub log_sigma: f64,
    pub n: Vec<f64>,
}

impl AbcNormalParams {
    pub fn simulated(&self) -> impl Iterator<Item = f64> + '_ {
        let sigma = self.log_sigma.exp();
        self.n.iter().map(move |n| self.mu + sigma * n)
    }
}

/// ABC for the mean and standard deviation of a normal sample, using the
/// sample minimum and maximum as summary statistics. The "log-likelihood" is
/// minus the discrepancy between simulated and observed summaries.
///
/// Priors: `mu ~ U(-10, 10)`, `ln σ ~ U(-10, 10)`, latent `n_i ~ N(0, 1)`.
#[derive(Debug, Clone)]
pub struct AbcNormal {
    num_data: usize,
    observed_min: f64,
    observed_max: f64,
}

impl AbcNormal {
    pub fn new(data: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidArgument("ABC data set is empty".into()));
        }
        Ok(AbcNormal {
            num_data: data.len(),
            observed_min: data.iter().copied().fold(f64::INFINITY, f64::min),
            observed_max: data.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn from_dataset(data: &Arc<Dataset>) -> Result<Self> {
        if data.num_columns() != 1 {
            return Err(Error::InvalidArgument(format!(
                "ABC data needs 1 column, found {}",
                data.num_columns()
            )));
        }
        Self::new(data.column(0))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_dataset(&load_shared(path)?)
    }

    /// `n` points from `N(mean, sd²)`.
    pub fn simulate_dataset(n: usize, mean: f64, sd: f64, seed: u64) -> Dataset {
        let mut rng = Rng::new(seed);
        let x = (0..n).map(|_| mean + sd * rng.randn()).collect();
        Dataset::from_columns(vec![x]).expect("one column")
    }
}

/// `-(min(sim) - x_min)² - (max(sim) - x_max)²`.
pub fn abc_discrepancy(simulated: impl Iterator<Item = f64>, observed_min: f64, observed_max: f64) -> f64 {
    let (lo, hi) = simulated.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    -(lo - observed_min).powi(2) - (hi - observed_max).powi(2)
}

impl Model for AbcNormal {
    type Params = AbcNormalParams;

    fn from_prior(&self, rng: &mut Rng) -> AbcNormalParams {
        AbcNormalParams {
            mu: -10.0 + 20.0 * rng.rand(),
            log_sigma: -10.0 + 20.0 * rng.rand(),
            n: (0..self.num_data).map(|_| rng.randn()).collect(),
        }
    }

    fn perturb(&self, params: &AbcNormalParams, rng: &mut Rng) -> (AbcNormalParams, f64) {
        let mut p = params.clone();
        match rng.rand_int(3) {
            0 => p.mu = wrap(p.mu + 20.0 * rng.randh(), -10.0, 10.0),
            1 => p.log_sigma = wrap(p.log_sigma + 20.0 * rng.randh(), -10.0, 10.0),
            _ => {
                let i = rng.rand_int(p.n.len());
                p.n[i] = rng.randn();
            }
        }
        (p, 0.0)
    }

    fn log_likelihood(&self, params: &AbcNormalParams) -> f64 {
        abc_discrepancy(params.simulated(), self.observed_min, self.observed_max)
    }

    fn print(&self, params: &AbcNormalParams) -> Vec<f64> {
        vec![params.mu, params.log_sigma.exp()]
    }

    fn description(&self) -> String {
        "mu, sigma".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ks_p_value, ks_statistic, thin};

    #[test]
    fn discrepancy_examples() {
        let sim = [0.0, 1.0, 2.0];
        assert_eq!(abc_discrepancy(sim.iter().copied(), 0.0, 2.0), 0.0);
        assert_eq!(abc_discrepancy(sim.iter().copied(), -1.0, 2.0), -1.0);
        assert!(abc_discrepancy(sim.iter().copied(), 0.3, -4.0) <= 0.0);
    }

    #[test]
    fn matching_simulation_scores_zero() {
        let model = AbcNormal::new(&[-1.0, 0.5, 3.0]).unwrap();
        let p = AbcNormalParams {
            mu: 1.0,
            log_sigma: 2f64.ln(),
            n: vec![-1.0, 0.0, 1.0],
        };
        assert_eq!(model.log_likelihood(&p), 0.0);
    }

    #[test]
    fn latent_moves_keep_the_standard_normal() {
        // Metropolis with log H = 0 and a constant likelihood: every move is
        // accepted, so the chain is the proposal chain itself
        let model = AbcNormal::new(&vec![0.0; 10]).unwrap();
        let mut rng = Rng::new(1);
        let mut p = model.from_prior(&mut rng);
        let mut n0 = Vec::new();
        let mut mus = Vec::new();
        for _ in 0..200_000 {
            let (q, log_h) = model.perturb(&p, &mut rng);
            assert_eq!(log_h, 0.0);
            p = q;
            n0.push(p.n[0]);
            mus.push(p.mu);
        }
        let n0 = thin(&n0, 100);
        let phi = |x: f64| 0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2));
        assert!(ks_p_value(ks_statistic(&n0, phi), n0.len()) > 0.01);
        let mus = thin(&mus, 20);
        let p = ks_p_value(ks_statistic(&mus, |x| ((x + 10.0) / 20.0).clamp(0.0, 1.0)), mus.len());
        assert!(p > 0.01, "{p}");
    }

    // Abramowitz-Stegun 7.1.26 is too coarse for KS at this n; use a series
    fn erf(x: f64) -> f64 {
        if x.abs() > 6.0 {
            return x.signum();
        }
        let mut sum = x;
        let mut term = x;
        let x2 = x * x;
        for k in 1..200 {
            term *= -x2 / k as f64;
            sum += term / (2 * k + 1) as f64;
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    }
}
