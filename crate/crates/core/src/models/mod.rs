//! Bundled models: linear regression, a Gaussian with a closed-form
//! evidence, a Gaussian mixture with an unknown number of components, and an
//! ABC toy problem.

mod abc;
mod analytic_gaussian;
mod mixture;
mod straight_line;

pub use abc::{abc_discrepancy, AbcNormal, AbcNormalParams};
pub use analytic_gaussian::{analytic_gaussian_log_z, AnalyticGaussian};
pub use mixture::{mixture_log_likelihood, GalaxyPrior, Mixture, MixtureParams};
pub use straight_line::{straightline_log_likelihood, StraightLine, StraightLineParams};

use std::path::PathBuf;

/// Directory holding the bundled datasets.
///
/// `DNEST_PATH` points at a checkout of this repository; otherwise the
/// crate's own `data/` directory is used.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("DNEST_PATH") {
        Some(root) => PathBuf::from(root).join("crates/core/data"),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

pub(crate) fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}
