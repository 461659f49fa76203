use std::f64::consts::PI;

use crate::model::Model;
use crate::rng::Rng;

/// `D` coordinates with iid `N(0, 1)` priors and likelihood factors
/// `N(θ_d | 0, s²)`, so the evidence is known exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticGaussian {
    dim: usize,
    width: f64,
}

impl AnalyticGaussian {
    pub fn new(dim: usize, width: f64) -> Self {
        assert!(dim >= 1 && width > 0.0, "need D >= 1 and s > 0");
        AnalyticGaussian { dim, width }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn exact_log_z(&self) -> f64 {
        analytic_gaussian_log_z(self.dim, self.width)
    }
}

/// `ln Z = -(D/2) ln(2π(1 + s²))`.
pub fn analytic_gaussian_log_z(dim: usize, width: f64) -> f64 {
    -(dim as f64 / 2.0) * (2.0 * PI * (1.0 + width * width)).ln()
}

impl Model for AnalyticGaussian {
    type Params = Vec<f64>;

    fn from_prior(&self, rng: &mut Rng) -> Vec<f64> {
        (0..self.dim).map(|_| rng.randn()).collect()
    }

    fn perturb(&self, theta: &Vec<f64>, rng: &mut Rng) -> (Vec<f64>, f64) {
        let mut next = theta.clone();
        let k = rng.rand_int(self.dim);
        let mut log_h = 0.5 * next[k] * next[k];
        next[k] += rng.randh();
        log_h -= 0.5 * next[k] * next[k];
        (next, log_h)
    }

    fn log_likelihood(&self, theta: &Vec<f64>) -> f64 {
        let var = self.width * self.width;
        let norm = -0.5 * (2.0 * PI * var).ln();
        theta.iter().map(|t| norm - 0.5 * t * t / var).sum()
    }

    fn print(&self, theta: &Vec<f64>) -> Vec<f64> {
        theta.clone()
    }

    fn description(&self) -> String {
        (0..self.dim)
            .map(|i| format!("theta[{i}]"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}
