//! Trans-dimensional collections of exchangeable components.
//!
//! An [`RjObject`] holds an unknown number `N` of components, each a vector
//! of `num_dimensions` reals drawn iid from a [`ConditionalPrior`] given some
//! hyperparameters. The joint prior factorises as
//! `p(N) p(α) Π p(x_i | α)`, and the object supplies every proposal itself:
//! birth/death moves on `N`, hyperparameter moves that carry the components
//! along in uniform space, and single-coordinate component moves.

mod laplace;

pub use laplace::Laplace;

use crate::error::{Error, Result};
use crate::rng::{wrap, Rng};
use crate::sampler::level_step;

/// The iid prior of a component given hyperparameters, described through its
/// CDF. `from_uniform` maps iid `U(0,1)` values to a draw from `p(x | α)` and
/// `to_uniform` is its inverse.
pub trait ConditionalPrior: Clone + Send + Sync {
    /// Draws the hyperparameters from their prior.
    fn from_prior(&mut self, rng: &mut Rng);

    /// Proposes new hyperparameters, returning the log of the hyperprior ratio
    /// times the proposal ratio.
    fn perturb_hyperparameters(&mut self, rng: &mut Rng) -> f64;

    fn hyperparameters(&self) -> Vec<f64>;

    fn hyperparameter_names(&self) -> Vec<String> {
        (0..self.hyperparameters().len())
            .map(|i| format!("alpha{i}"))
            .collect()
    }

    fn from_uniform(&self, values: &mut [f64]);

    fn to_uniform(&self, values: &mut [f64]);

    fn log_pdf(&self, values: &[f64]) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorType {
    /// Uniform over `{0, 1, ..., max}`.
    Uniform,
    /// `p(N) ∝ 1/(N+1)` over `{0, 1, ..., max}`.
    LogUniform,
}

/// Log prior probability of `n` components.
pub fn n_prior_log_mass(n: usize, prior_type: PriorType, max_num_components: usize) -> Result<f64> {
    if n > max_num_components {
        return Err(Error::InvalidArgument(format!(
            "number of components {n} exceeds the maximum {max_num_components}"
        )));
    }
    Ok(match prior_type {
        PriorType::Uniform => -((max_num_components + 1) as f64).ln(),
        PriorType::LogUniform => -((n + 1) as f64).ln() - harmonic(max_num_components + 1).ln(),
    })
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Strictly positive uniform draw, so quantile functions never see 0.
fn rand_open(rng: &mut Rng) -> f64 {
    loop {
        let u = rng.rand();
        if u > 0.0 {
            return u;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RjObject<P> {
    num_dimensions: usize,
    max_num_components: usize,
    fixed: bool,
    prior_type: PriorType,
    conditional_prior: P,
    components: Vec<Vec<f64>>,
}

impl<P: ConditionalPrior> RjObject<P> {
    pub fn new(
        num_dimensions: usize,
        max_num_components: usize,
        fixed: bool,
        conditional_prior: P,
        prior_type: PriorType,
    ) -> Result<Self> {
        if num_dimensions == 0 || max_num_components == 0 {
            return Err(Error::InvalidArgument(
                "an RjObject needs at least one dimension and one component slot".into(),
            ));
        }
        Ok(RjObject {
            num_dimensions,
            max_num_components,
            fixed,
            prior_type,
            conditional_prior,
            components: Vec::new(),
        })
    }

    pub fn num_dimensions(&self) -> usize {
        self.num_dimensions
    }

    pub fn max_num_components(&self) -> usize {
        self.max_num_components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn conditional_prior(&self) -> &P {
        &self.conditional_prior
    }

    pub fn prior_type(&self) -> PriorType {
        self.prior_type
    }

    pub fn is_fixed(&self) -> bool {
        self.fixed
    }

    fn draw_num_components(&self, rng: &mut Rng) -> usize {
        if self.fixed {
            return self.max_num_components;
        }
        match self.prior_type {
            PriorType::Uniform => rng.rand_int(self.max_num_components + 1),
            PriorType::LogUniform => {
                let total = harmonic(self.max_num_components + 1);
                let mut target = rng.rand() * total;
                for n in 0..=self.max_num_components {
                    target -= 1.0 / (n + 1) as f64;
                    if target < 0.0 {
                        return n;
                    }
                }
                self.max_num_components
            }
        }
    }

    fn draw_component(&self, rng: &mut Rng) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.num_dimensions).map(|_| rand_open(rng)).collect();
        self.conditional_prior.from_uniform(&mut x);
        x
    }

    pub fn from_prior(&mut self, rng: &mut Rng) {
        self.conditional_prior.from_prior(rng);
        let n = self.draw_num_components(rng);
        self.components = (0..n).map(|_| self.draw_component(rng)).collect();
    }

    /// Log prior density of the components given the hyperparameters.
    pub fn log_components_pdf(&self) -> f64 {
        self.components
            .iter()
            .map(|x| self.conditional_prior.log_pdf(x))
            .sum()
    }

    /// Proposes a change in place and returns ln H. Picks uniformly among a
    /// birth/death move (unless `N` is fixed), a hyperparameter move and a
    /// single-coordinate component move.
    pub fn perturb(&mut self, rng: &mut Rng) -> f64 {
        let moves = if self.fixed { 2 } else { 3 };
        match rng.rand_int(moves) {
            0 => self.perturb_components(rng),
            1 => self.perturb_hyperparameters(rng),
            _ => self.birth_or_death(rng),
        }
    }

    fn birth_or_death(&mut self, rng: &mut Rng) -> f64 {
        let n = self.components.len() as i64;
        let proposed = n + level_step(rng);
        if proposed < 0 || proposed > self.max_num_components as i64 {
            return f64::NEG_INFINITY;
        }
        let proposed = proposed as usize;
        let max = self.max_num_components;
        let log_h = n_prior_log_mass(proposed, self.prior_type, max).expect("checked range")
            - n_prior_log_mass(n as usize, self.prior_type, max).expect("current N in range");
        while self.components.len() < proposed {
            let x = self.draw_component(rng);
            self.components.push(x);
        }
        while self.components.len() > proposed {
            let i = rng.rand_int(self.components.len());
            self.components.swap_remove(i);
        }
        log_h
    }

    fn perturb_hyperparameters(&mut self, rng: &mut Rng) -> f64 {
        for x in &mut self.components {
            self.conditional_prior.to_uniform(x);
        }
        let log_h = self.conditional_prior.perturb_hyperparameters(rng);
        for x in &mut self.components {
            self.conditional_prior.from_uniform(x);
        }
        log_h
    }

    fn perturb_components(&mut self, rng: &mut Rng) -> f64 {
        if self.components.is_empty() {
            return 0.0;
        }
        let i = rng.rand_int(self.components.len());
        let k = rng.rand_int(self.num_dimensions);
        let x = &mut self.components[i];
        self.conditional_prior.to_uniform(x);
        x[k] = wrap(x[k] + rng.randh(), 0.0, 1.0);
        let degenerate = x[k] == 0.0;
        self.conditional_prior.from_uniform(x);
        if degenerate {
            f64::NEG_INFINITY
        } else {
            0.0
        }
    }

    /// Print layout: `num_dimensions`, `max_num_components`, the
    /// hyperparameters, `N`, then coordinate 0 of every slot, coordinate 1 of
    /// every slot, and so on, with zeros in slots at or beyond `N`.
    pub fn print(&self) -> Vec<f64> {
        let hyper = self.conditional_prior.hyperparameters();
        let mut out = Vec::with_capacity(3 + hyper.len() + self.num_dimensions * self.max_num_components);
        out.push(self.num_dimensions as f64);
        out.push(self.max_num_components as f64);
        out.extend(hyper);
        out.push(self.components.len() as f64);
        for k in 0..self.num_dimensions {
            for slot in 0..self.max_num_components {
                out.push(self.components.get(slot).map_or(0.0, |x| x[k]));
            }
        }
        out
    }

    /// Field names matching [`RjObject::print`]; `coordinate_names` labels the
    /// component dimensions.
    pub fn description(&self, coordinate_names: &[&str]) -> String {
        let mut names = vec!["num_dimensions".to_string(), "max_num_components".to_string()];
        names.extend(self.conditional_prior.hyperparameter_names());
        names.push("num_components".to_string());
        for k in 0..self.num_dimensions {
            let base = coordinate_names
                .get(k)
                .map_or_else(|| format!("x{k}"), |s| s.to_string());
            names.extend((0..self.max_num_components).map(|slot| format!("{base}[{slot}]")));
        }
        names.join(", ")
    }
}

/// Reads `N` and the occupied components back out of a printed row.
pub fn parse_printed(fields: &[f64], num_hyperparameters: usize) -> Option<(usize, Vec<Vec<f64>>)> {
    let d = *fields.first()? as usize;
    let max = *fields.get(1)? as usize;
    let n = *fields.get(2 + num_hyperparameters)? as usize;
    let body = fields.get(3 + num_hyperparameters..)?;
    if body.len() != d * max || n > max {
        return None;
    }
    let components = (0..n)
        .map(|slot| (0..d).map(|k| body[k * max + slot]).collect())
        .collect();
    Some((n, components))
}
