use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use crate::data::{load_shared, Dataset};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::rjobject::{ConditionalPrior, Laplace, PriorType, RjObject};
use crate::rng::{wrap, Rng};

use super::log_sum_exp;

/// Hyperparameters of the Gaussian-mixture conditional prior. Components are
/// `(μ, ln σ, ln W)` with independent Laplace priors
/// `μ ~ L(a_μ, b_μ)`, `ln σ ~ L(a_lnσ, b_lnσ)`, `ln W ~ L(0, b_lnW)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GalaxyPrior {
    pub location_mu: f64,
    pub log_scale_mu: f64,
    pub location_log_sigma: f64,
    pub scale_log_sigma: f64,
    pub scale_log_weight: f64,
}

impl Default for GalaxyPrior {
    fn default() -> Self {
        GalaxyPrior {
            location_mu: 0.0,
            log_scale_mu: 0.0,
            location_log_sigma: 0.0,
            scale_log_sigma: 1.0,
            scale_log_weight: 1.0,
        }
    }
}

// U(0, 5) scales are drawn from [0, 5); the measure-zero value 0 stands for 5
fn positive_scale(b: f64) -> f64 {
    if b > 0.0 {
        b
    } else {
        5.0
    }
}

impl GalaxyPrior {
    fn laplaces(&self) -> [Laplace; 3] {
        let l = |a, b| Laplace::new(a, b).expect("hyperparameters keep scales positive");
        [
            l(self.location_mu, self.log_scale_mu.exp()),
            l(self.location_log_sigma, positive_scale(self.scale_log_sigma)),
            l(0.0, positive_scale(self.scale_log_weight)),
        ]
    }
}

impl ConditionalPrior for GalaxyPrior {
    fn from_prior(&mut self, rng: &mut Rng) {
        self.location_mu = -1000.0 + 2000.0 * rng.rand();
        self.log_scale_mu = -10.0 + 20.0 * rng.rand();
        self.location_log_sigma = -10.0 + 20.0 * rng.rand();
        self.scale_log_sigma = 5.0 * rng.rand();
        self.scale_log_weight = 5.0 * rng.rand();
    }

    fn perturb_hyperparameters(&mut self, rng: &mut Rng) -> f64 {
        match rng.rand_int(5) {
            0 => self.location_mu = wrap(self.location_mu + 2000.0 * rng.randh(), -1000.0, 1000.0),
            1 => self.log_scale_mu = wrap(self.log_scale_mu + 20.0 * rng.randh(), -10.0, 10.0),
            2 => {
                self.location_log_sigma = wrap(self.location_log_sigma + 20.0 * rng.randh(), -10.0, 10.0)
            }
            3 => self.scale_log_sigma = wrap(self.scale_log_sigma + 5.0 * rng.randh(), 0.0, 5.0),
            _ => self.scale_log_weight = wrap(self.scale_log_weight + 5.0 * rng.randh(), 0.0, 5.0),
        }
        0.0
    }

    fn hyperparameters(&self) -> Vec<f64> {
        vec![
            self.location_mu,
            self.log_scale_mu,
            self.location_log_sigma,
            self.scale_log_sigma,
            self.scale_log_weight,
        ]
    }

    fn hyperparameter_names(&self) -> Vec<String> {
        ["a_mu", "log_b_mu", "a_log_sigma", "b_log_sigma", "b_log_weight"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn from_uniform(&self, values: &mut [f64]) {
        for (v, l) in values.iter_mut().zip(self.laplaces()) {
            *v = l.cdf_inverse(*v).expect("uniform coordinates lie in (0, 1)");
        }
    }

    fn to_uniform(&self, values: &mut [f64]) {
        for (v, l) in values.iter_mut().zip(self.laplaces()) {
            *v = l.cdf(*v);
        }
    }

    fn log_pdf(&self, values: &[f64]) -> f64 {
        values.iter().zip(self.laplaces()).map(|(&v, l)| l.log_pdf(v)).sum()
    }
}

pub type MixtureParams = RjObject<GalaxyPrior>;

/// One-dimensional Gaussian mixture with an unknown number of components,
/// `N ∈ {1, ..., 100}` with `p(N) ∝ 1/(N+1)`.
#[derive(Debug, Clone)]
pub struct Mixture {
    data: Arc<Dataset>,
    max_num_components: usize,
}

impl Mixture {
    pub const MAX_COMPONENTS: usize = 100;

    pub fn new(data: Arc<Dataset>) -> Result<Self> {
        Self::with_max_components(data, Self::MAX_COMPONENTS)
    }

    pub fn with_max_components(data: Arc<Dataset>, max_num_components: usize) -> Result<Self> {
        if data.num_columns() != 1 || data.num_rows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "mixture data needs one non-empty column, found {} columns and {} rows",
                data.num_columns(),
                data.num_rows()
            )));
        }
        if max_num_components == 0 {
            return Err(Error::InvalidArgument("mixture needs at least one component".into()));
        }
        Ok(Mixture {
            data,
            max_num_components,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(load_shared(path)?)
    }

    pub fn data(&self) -> &[f64] {
        self.data.column(0)
    }

    fn empty_params(&self) -> MixtureParams {
        RjObject::new(3, self.max_num_components, false, GalaxyPrior::default(), PriorType::LogUniform)
            .expect("valid dimensions")
    }
}

/// `Σ_i ln Σ_j w_j N(x_i | μ_j, σ_j²)` with `w_j = W_j / Σ W`. Components
/// are `(μ, ln σ, ln W)`.
pub fn mixture_log_likelihood(components: &[Vec<f64>], data: &[f64]) -> f64 {
    if components.is_empty() {
        return f64::NEG_INFINITY;
    }
    let log_total_w = log_sum_exp(components.iter().map(|c| c[2]));
    let terms: Vec<(f64, f64, f64)> = components
        .iter()
        .map(|c| {
            let sigma = c[1].exp();
            let log_norm = c[2] - log_total_w - c[1] - 0.5 * (2.0 * PI).ln();
            (c[0], sigma, log_norm)
        })
        .collect();
    data.iter()
        .map(|&x| {
            log_sum_exp(terms.iter().map(move |&(mu, sigma, log_norm)| {
                let z = (x - mu) / sigma;
                log_norm - 0.5 * z * z
            }))
        })
        .sum()
}

impl Model for Mixture {
    type Params = MixtureParams;

    fn from_prior(&self, rng: &mut Rng) -> MixtureParams {
        let mut params = self.empty_params();
        loop {
            params.from_prior(rng);
            if params.num_components() > 0 {
                return params;
            }
        }
    }

    fn perturb(&self, params: &MixtureParams, rng: &mut Rng) -> (MixtureParams, f64) {
        let mut next = params.clone();
        let log_h = next.perturb(rng);
        if next.num_components() == 0 {
            return (next, f64::NEG_INFINITY);
        }
        (next, log_h)
    }

    fn log_likelihood(&self, params: &MixtureParams) -> f64 {
        mixture_log_likelihood(params.components(), self.data())
    }

    fn print(&self, params: &MixtureParams) -> Vec<f64> {
        params.print()
    }

    fn description(&self) -> String {
        self.empty_params().description(&["mu", "log_sigma", "log_weight"])
    }
}
