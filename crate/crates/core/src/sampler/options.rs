use std::path::PathBuf;

use crate::error::{Error, Result};

/// Run parameters: the eight values of an `OPTIONS` file plus the
/// command-line extras.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Particles per thread.
    pub num_particles: usize,
    /// Stashed likelihoods above the top level needed to create a new level.
    pub new_level_interval: usize,
    /// MCMC steps between saved particles.
    pub save_interval: usize,
    /// MCMC steps each thread takes between pooling barriers.
    pub thread_steps: usize,
    /// Number of levels to build; 0 picks it automatically.
    pub max_num_levels: usize,
    /// Backtracking scale length for the stage-one level weights.
    pub lambda: f64,
    /// Strength of the equal-visit correction in stage two.
    pub beta: f64,
    /// Stop after this many saves; 0 runs until interrupted.
    pub max_num_saves: usize,
    /// Nominal prior-mass ratio between consecutive levels.
    pub compression: f64,
    pub seed: Option<u64>,
    pub num_threads: usize,
    pub data_path: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            num_particles: 5,
            new_level_interval: 10_000,
            save_interval: 10_000,
            thread_steps: 100,
            max_num_levels: 0,
            lambda: 10.0,
            beta: 100.0,
            max_num_saves: 10_000,
            compression: std::f64::consts::E,
            seed: None,
            num_threads: 1,
            data_path: None,
        }
    }
}

impl Options {
    pub fn has_default_compression(&self) -> bool {
        (self.compression - std::f64::consts::E).abs() < 1e-12
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidOptions(msg));
        if self.num_particles == 0 {
            return fail("number of particles must be at least 1".into());
        }
        if self.new_level_interval == 0 || self.save_interval == 0 || self.thread_steps == 0 {
            return fail("new level interval, save interval and thread steps must be at least 1".into());
        }
        if self.thread_steps > self.new_level_interval || self.thread_steps > self.save_interval {
            return fail(format!(
                "thread steps ({}) must not exceed the new level interval ({}) or the save interval ({})",
                self.thread_steps, self.new_level_interval, self.save_interval
            ));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return fail(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return fail(format!("beta must be non-negative, got {}", self.beta));
        }
        if !(self.compression > 1.0 && self.compression.is_finite()) {
            return fail(format!("compression must be greater than 1, got {}", self.compression));
        }
        if !self.has_default_compression() && self.max_num_levels == 0 {
            return fail(
                "a non-default compression is incompatible with an automatic number of levels".into(),
            );
        }
        if self.num_threads == 0 {
            return fail("number of threads must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Options::default().validate().unwrap();
    }

    #[test]
    fn thread_steps_bounded_by_intervals() {
        let o = Options {
            thread_steps: 20_000,
            ..Options::default()
        };
        assert!(o.validate().is_err());
    }

    #[test]
    fn compression_needs_fixed_level_count() {
        let o = Options {
            compression: 10.0,
            ..Options::default()
        };
        assert!(o.validate().is_err());
        let o = Options {
            compression: 10.0,
            max_num_levels: 30,
            ..Options::default()
        };
        o.validate().unwrap();
        let o = Options {
            compression: 1.0,
            max_num_levels: 30,
            ..Options::default()
        };
        assert!(o.validate().is_err());
    }
}
