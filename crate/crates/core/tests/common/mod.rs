//! Test models and statistical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use dnest::{wrap, Model, Rng};
use statrs::distribution::{ContinuousCDF, Normal};

/// `L(θ) = θ` on a uniform prior, so `X(ℓ) = 1 - ℓ`.
pub struct Ramp;

impl Model for Ramp {
    type Params = f64;
    fn from_prior(&self, rng: &mut Rng) -> f64 {
        rng.rand()
    }
    fn perturb(&self, x: &f64, rng: &mut Rng) -> (f64, f64) {
        (wrap(x + rng.randh(), 0.0, 1.0), 0.0)
    }
    fn log_likelihood(&self, x: &f64) -> f64 {
        x.ln()
    }
    fn print(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }
    fn description(&self) -> String {
        "theta".into()
    }
}

/// Uniform prior over `GRID_POINTS` values `k / (GRID_POINTS - 1)` with a
/// Gaussian likelihood. The state is a continuous `u ∈ [0, 1)` and the grid
/// point is `⌊u · GRID_POINTS⌋`, so the likelihood has plateaus.
pub struct Grid;

pub const GRID_POINTS: usize = 101;

impl Grid {
    pub fn theta(u: f64) -> f64 {
        let k = ((u * GRID_POINTS as f64) as usize).min(GRID_POINTS - 1);
        k as f64 / (GRID_POINTS - 1) as f64
    }

    pub fn log_l_at(theta: f64) -> f64 {
        let s: f64 = 0.02;
        -0.5 * (2.0 * PI * s * s).ln() - 0.5 * ((theta - 0.3) / s).powi(2)
    }

    /// `ln[(1/101) Σ_k L(θ_k)]` by direct summation.
    pub fn exact_log_z() -> f64 {
        let n = GRID_POINTS as f64;
        let z: f64 = (0..GRID_POINTS)
            .map(|k| Self::log_l_at(k as f64 / (n - 1.0)).exp())
            .sum::<f64>()
            / n;
        z.ln()
    }
}

impl Model for Grid {
    type Params = f64;
    fn from_prior(&self, rng: &mut Rng) -> f64 {
        rng.rand()
    }
    fn perturb(&self, u: &f64, rng: &mut Rng) -> (f64, f64) {
        (wrap(u + rng.randh(), 0.0, 1.0), 0.0)
    }
    fn log_likelihood(&self, u: &f64) -> f64 {
        Self::log_l_at(Self::theta(*u))
    }
    fn print(&self, u: &f64) -> Vec<f64> {
        vec![Self::theta(*u)]
    }
    fn description(&self) -> String {
        "theta".into()
    }
}

/// Constant likelihood on a uniform prior.
pub struct Constant(pub f64);

impl Model for Constant {
    type Params = f64;
    fn from_prior(&self, rng: &mut Rng) -> f64 {
        rng.rand()
    }
    fn perturb(&self, u: &f64, rng: &mut Rng) -> (f64, f64) {
        (wrap(u + rng.randh(), 0.0, 1.0), 0.0)
    }
    fn log_likelihood(&self, _: &f64) -> f64 {
        self.0
    }
    fn print(&self, u: &f64) -> Vec<f64> {
        vec![*u]
    }
    fn description(&self) -> String {
        "u".into()
    }
}

/// One-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the KS statistic `d` with `n` samples
/// (Kolmogorov distribution with the Stephens small-sample correction).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

pub fn ks_p(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    ks_p_value(ks_statistic(samples, cdf), samples.len())
}

pub fn normal_cdf(mean: f64, sd: f64) -> impl Fn(f64) -> f64 {
    let n = Normal::new(mean, sd).expect("valid normal");
    move |x| n.cdf(x)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
