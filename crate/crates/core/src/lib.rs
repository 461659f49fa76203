//! Diffusive Nested Sampling.
//!
//! Estimates the marginal likelihood `Z = ∫ π(θ) L(θ) dθ` of a model and
//! produces posterior samples by running Metropolis chains over a mixture of
//! likelihood-constrained priors, building levels of geometrically shrinking
//! prior mass as it goes.
//!
//! A model implements [`Model`]: a prior sampler, a proposal that returns its
//! log Hastings-and-prior ratio, a log-likelihood and a print format. The
//! [`Sampler`] writes `sample.txt`, `sample_info.txt` and `levels.txt`, and
//! [`postprocess`] turns those into ln Z, the information, an effective sample
//! size and resampled posterior draws.
//!
//! ```no_run
//! use dnest::models::AnalyticGaussian;
//! use dnest::{postprocess, Options, Sampler};
//!
//! let model = AnalyticGaussian::new(5, 0.1);
//! let options = Options { max_num_levels: 30, max_num_saves: 2000, seed: Some(1), ..Options::default() };
//! Sampler::new(&model, options)?.write_to("run")?.run()?;
//! let results = postprocess::postprocess_dir("run", &postprocess::PostprocessOptions::default())?;
//! println!("log(Z) = {}", results.summary.log_z);
//! # Ok::<(), dnest::Error>(())
//! ```

pub mod cli;
pub mod data;
mod error;
pub mod model;
pub mod models;
pub mod postprocess;
pub mod rjobject;
pub mod rng;
pub mod sampler;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use model::{LikelihoodValue, Model};
pub use rng::{wrap, Rng};
pub use sampler::{Options, Sampler};
