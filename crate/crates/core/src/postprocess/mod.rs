//! Turning saved samples into evidence, information, posterior samples and
//! diagnostics.
//!
//! Each level `k` owns the slab of prior mass between its threshold and the
//! next one up, `X_k - X_{k+1}` (with `X = 0` above the top level). A saved
//! sample belongs to the highest level whose threshold it exceeds, and the
//! samples of a slab share its mass equally, in likelihood order. Slabs that
//! received no samples hand their mass to the nearest non-empty slab below
//! (or above, if there is none below), so the masses always sum to one.

mod diagnostics;
mod files;

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

pub use diagnostics::{emit_diagnostics, LEVELS_DIAG_FILE, TRACE_FILE, WEIGHTS_FILE};
pub use files::{RunFiles, SampleInfo};

use crate::error::{Error, Result};
use crate::model::format_fields;
use crate::rng::Rng;
use crate::sampler::Level;

pub const POSTERIOR_SAMPLE_FILE: &str = "posterior_sample.txt";

/// A saved sample with its share of prior mass and posterior weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSample {
    pub row_index: usize,
    /// The level the sampler had assigned when the sample was saved.
    pub level_index: usize,
    pub log_l: f64,
    /// ln X at the midpoint of the sample's share of its slab.
    pub log_x: f64,
    pub log_dx: f64,
    pub log_posterior_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub log_z: f64,
    pub information: f64,
    pub ess: f64,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "log(Z) = {}", self.log_z)?;
        writeln!(f, "Information = {} nats.", self.information)?;
        write!(f, "Effective sample size = {}", self.ess)
    }
}

/// Prior-mass shares of a set of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MassAssignment {
    pub log_dx: Vec<f64>,
    /// ln X at the midpoint of each sample's share.
    pub log_x: Vec<f64>,
    /// Levels whose slab held no sample and was merged into a neighbour.
    pub empty_levels: Vec<usize>,
}

/// `ln(e^a + e^b)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)` for `a >= b`.
fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-(b - a).exp_m1()).ln()
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// The slab of a sample: the highest level whose threshold it exceeds.
pub fn slab_of(levels: &[Level], info: &SampleInfo) -> usize {
    let v = info.likelihood();
    levels[1..].partition_point(|l| l.threshold.total_cmp(&v) == Ordering::Less)
}

/// Shares out the prior mass of every level among the saved samples.
pub fn assign_log_dx(info: &[SampleInfo], levels: &[Level]) -> Result<MassAssignment> {
    if info.is_empty() {
        return Err(Error::NoSamples);
    }
    let num_levels = levels.len();
    if let Some((row, s)) = info.iter().enumerate().find(|(_, s)| s.level >= num_levels) {
        return Err(Error::MissingLevel {
            row,
            level: s.level,
            num_levels,
        });
    }

    let slabs: Vec<usize> = info.iter().map(|s| slab_of(levels, s)).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_levels];
    for (i, &k) in slabs.iter().enumerate() {
        members[k].push(i);
    }
    let empty_levels: Vec<usize> = (0..num_levels).filter(|&k| members[k].is_empty()).collect();

    // owner[k]: the non-empty slab that takes slab k's mass
    let first_nonempty = (0..num_levels).find(|&k| !members[k].is_empty()).expect("samples exist");
    let mut owner = vec![first_nonempty; num_levels];
    let mut current = first_nonempty;
    for (k, m) in members.iter().enumerate() {
        if !m.is_empty() {
            current = k;
        }
        owner[k] = current;
    }

    let log_x_at = |k: usize| {
        if k < num_levels {
            levels[k].log_x
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut log_dx = vec![0.0; info.len()];
    let mut log_x = vec![0.0; info.len()];
    for owned in 0..num_levels {
        let group = &members[owned];
        if group.is_empty() {
            continue;
        }
        let first = owner.iter().position(|&o| o == owned).expect("owns itself");
        let last = owner.iter().rposition(|&o| o == owned).expect("owns itself");
        let (top, bottom) = (log_x_at(first), log_x_at(last + 1));
        let log_width = log_sub_exp(top, bottom);
        let n = group.len() as f64;

        let mut ranked = group.clone();
        ranked.sort_by(|&a, &b| info[a].likelihood().total_cmp(&info[b].likelihood()));
        for (r, &i) in ranked.iter().enumerate() {
            log_dx[i] = log_width - n.ln();
            // rank 0 (lowest likelihood) sits nearest the top of the slab
            let offset = (n - r as f64 - 0.5) / n;
            log_x[i] = log_add_exp(bottom, log_width + offset.ln());
        }
    }
    Ok(MassAssignment {
        log_dx,
        log_x,
        empty_levels,
    })
}

/// `ln Σ exp(log_dx + log_l)`.
pub fn compute_log_z(log_dx: &[f64], log_l: &[f64]) -> f64 {
    let terms: Vec<f64> = log_dx.iter().zip(log_l).map(|(d, l)| d + l).collect();
    log_sum_exp(&terms)
}

/// Normalised posterior weights `exp(log_dx + log_l - log_z)`, in logs.
pub fn log_posterior_weights(log_dx: &[f64], log_l: &[f64], log_z: f64) -> Vec<f64> {
    log_dx.iter().zip(log_l).map(|(d, l)| d + l - log_z).collect()
}

/// `H = Σ p_i (log_l_i - log_z)`.
pub fn compute_information(log_dx: &[f64], log_l: &[f64], log_z: f64) -> f64 {
    log_dx
        .iter()
        .zip(log_l)
        .map(|(d, l)| {
            let p = (d + l - log_z).exp();
            if p > 0.0 {
                p * (l - log_z)
            } else {
                0.0
            }
        })
        .sum()
}

/// `exp(-Σ p ln p)` for normalised weights `p`.
pub fn compute_ess(weights: &[f64]) -> f64 {
    let entropy: f64 = weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    entropy.exp()
}

/// Draws `count` indices with replacement, with probabilities proportional
/// to `weights`.
pub fn resample_posterior(weights: &[f64], count: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(weights)
        .map_err(|e| Error::InvalidArgument(format!("posterior weights: {e}")))?;
    Ok((0..count).map(|_| dist.sample(rng.core())).collect())
}

fn resample_count(ess: f64) -> usize {
    (ess.round() as usize).max(1)
}

/// Mass shares and posterior weights for every saved sample.
pub fn weigh_samples(info: &[SampleInfo], levels: &[Level]) -> Result<(Vec<WeightedSample>, MassAssignment, f64)> {
    let mass = assign_log_dx(info, levels)?;
    let log_l: Vec<f64> = info.iter().map(|s| s.log_l).collect();
    let log_z = compute_log_z(&mass.log_dx, &log_l);
    let log_w = log_posterior_weights(&mass.log_dx, &log_l, log_z);
    let samples = info
        .iter()
        .enumerate()
        .map(|(i, s)| WeightedSample {
            row_index: i,
            level_index: s.level,
            log_l: s.log_l,
            log_x: mass.log_x[i],
            log_dx: mass.log_dx[i],
            log_posterior_weight: log_w[i],
        })
        .collect();
    Ok((samples, mass, log_z))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostprocessOptions {
    /// Seed for resampling; drawn from the clock when absent.
    pub seed: Option<u64>,
    /// Write `posterior_sample.txt`.
    pub write_posterior: bool,
    /// Write the diagnostic CSV files.
    pub write_diagnostics: bool,
}

impl Default for PostprocessOptions {
    fn default() -> Self {
        PostprocessOptions {
            seed: None,
            write_posterior: true,
            write_diagnostics: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Postprocessed {
    pub summary: RunSummary,
    pub samples: Vec<WeightedSample>,
    /// Rows of `sample.txt` drawn as posterior samples.
    pub posterior_rows: Vec<usize>,
    pub empty_levels: Vec<usize>,
}

pub fn postprocess(files: &RunFiles, options: &PostprocessOptions) -> Result<Postprocessed> {
    let (samples, mass, log_z) = weigh_samples(&files.info, &files.levels)?;
    let log_l: Vec<f64> = files.info.iter().map(|s| s.log_l).collect();
    let weights: Vec<f64> = samples.iter().map(|s| s.log_posterior_weight.exp()).collect();
    let ess = compute_ess(&weights);
    let summary = RunSummary {
        log_z,
        information: compute_information(&mass.log_dx, &log_l, log_z),
        ess,
    };
    let mut rng = Rng::new(options.seed.unwrap_or_else(Rng::time_seed));
    let posterior_rows = if log_z.is_finite() {
        resample_posterior(&weights, resample_count(ess), &mut rng)?
    } else {
        Vec::new()
    };
    if options.write_posterior {
        write_posterior(files, &posterior_rows)?;
    }
    if options.write_diagnostics {
        emit_diagnostics(files, &samples)?;
    }
    Ok(Postprocessed {
        summary,
        samples,
        posterior_rows,
        empty_levels: mass.empty_levels,
    })
}

/// Reads a run directory, writes the posterior samples and diagnostics next
/// to the run files, and returns the summary.
pub fn postprocess_dir(dir: impl AsRef<Path>, options: &PostprocessOptions) -> Result<Postprocessed> {
    postprocess(&RunFiles::read(dir)?, options)
}

fn write_posterior(files: &RunFiles, rows: &[usize]) -> Result<()> {
    let path = files.dir.join(POSTERIOR_SAMPLE_FILE);
    let mut text = String::new();
    if let Some(d) = &files.description {
        text.push_str(&format!("# {d}\n"));
    }
    for &r in rows {
        text.push_str(&format_fields(&files.samples[r]));
        text.push('\n');
    }
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbcOptions {
    /// Position of the tolerance level as a fraction of the top level index.
    pub threshold_fraction: f64,
    pub seed: Option<u64>,
    pub write_posterior: bool,
}

impl Default for AbcOptions {
    fn default() -> Self {
        AbcOptions {
            threshold_fraction: 0.8,
            seed: None,
            write_posterior: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbcPosterior {
    /// The level used as the tolerance.
    pub level: usize,
    /// The tolerance: minus the level's log-likelihood threshold.
    pub epsilon: f64,
    /// ln P(discrepancy < epsilon) under the prior.
    pub log_x: f64,
    /// Rows of `sample.txt` kept (discrepancy below the tolerance).
    pub kept_rows: Vec<usize>,
    /// Posterior rows drawn from the kept ones.
    pub posterior_rows: Vec<usize>,
    pub ess: f64,
}

impl fmt::Display for AbcPosterior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Threshold level = {}", self.level)?;
        writeln!(f, "Epsilon = {}", self.epsilon)?;
        writeln!(f, "log(P(rho < epsilon)) = {}", self.log_x)?;
        write!(f, "Effective sample size = {}", self.ess)
    }
}

/// The ABC posterior at tolerance level `⌊threshold_fraction (J - 1)⌋`:
/// every sample above the level, weighted by prior mass alone.
pub fn postprocess_abc(files: &RunFiles, options: &AbcOptions) -> Result<AbcPosterior> {
    let f = options.threshold_fraction;
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold fraction must lie in (0, 1], got {f}"
        )));
    }
    let levels = &files.levels;
    let level = (f * (levels.len() - 1) as f64).floor() as usize;
    let mass = assign_log_dx(&files.info, levels)?;
    let kept_rows: Vec<usize> = (0..files.info.len())
        .filter(|&i| level == 0 || files.info[i].likelihood() > levels[level].threshold)
        .collect();
    if kept_rows.is_empty() {
        return Err(Error::EmptyThresholdLevel { level });
    }
    let log_w: Vec<f64> = kept_rows.iter().map(|&i| mass.log_dx[i]).collect();
    let total = log_sum_exp(&log_w);
    let weights: Vec<f64> = log_w.iter().map(|w| (w - total).exp()).collect();
    let ess = compute_ess(&weights);
    let mut rng = Rng::new(options.seed.unwrap_or_else(Rng::time_seed));
    let posterior_rows: Vec<usize> = resample_posterior(&weights, resample_count(ess), &mut rng)?
        .into_iter()
        .map(|k| kept_rows[k])
        .collect();
    if options.write_posterior {
        write_posterior(files, &posterior_rows)?;
    }
    Ok(AbcPosterior {
        level,
        epsilon: -levels[level].threshold.log_l,
        log_x: levels[level].log_x,
        kept_rows,
        posterior_rows,
        ess,
    })
}
