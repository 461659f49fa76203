//! Levels, their bookkeeping, and the rules that create and refine them.

use crate::model::LikelihoodValue;

/// Log-likelihood written for level 0, which stands for the whole prior.
pub const PRIOR_LOG_L: f64 = -1e308;

/// Pseudo-count pulling each level's compression estimate towards the
/// nominal value until real visits accumulate.
pub const COMPRESSION_PSEUDO_COUNT: f64 = 100.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelCounters {
    pub accepts: u64,
    pub tries: u64,
    pub exceeds: u64,
    pub visits: u64,
}

impl LevelCounters {
    pub fn add(&mut self, other: &LevelCounters) {
        self.accepts += other.accepts;
        self.tries += other.tries;
        self.exceeds += other.exceeds;
        self.visits += other.visits;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub threshold: LikelihoodValue,
    /// Estimated ln X of the threshold, in nats.
    pub log_x: f64,
    pub counters: LevelCounters,
}

impl Level {
    pub fn prior() -> Self {
        Level {
            threshold: LikelihoodValue::new(PRIOR_LOG_L, 0.0),
            log_x: 0.0,
            counters: LevelCounters::default(),
        }
    }
}

/// Whether a point with likelihood `value` lies inside level `j`.
///
/// Level 0 is the unconstrained prior and admits every point, including
/// ones with zero likelihood.
pub fn admits(levels: &[Level], j: usize, value: LikelihoodValue) -> bool {
    j == 0 || value > levels[j].threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Levels are still being created; weights favour the top level.
    Building,
    /// The level set is frozen; weights are uniform.
    Exploring,
}

/// Log mixture weight of level `j`.
///
/// While building, `w_j ∝ exp(j/λ)` normalised so the top level has log
/// weight 0. Once the level set is complete every level gets log weight 0.
pub fn level_weight(j: usize, num_levels: usize, lambda: f64, stage: Stage) -> f64 {
    debug_assert!(j < num_levels);
    match stage {
        Stage::Building => (j as f64 - (num_levels as f64 - 1.0)) / lambda,
        Stage::Exploring => 0.0,
    }
}

/// Refreshes every level's ln X from the exceeds/visits counts of the level
/// below it, regularised towards the nominal compression.
pub fn recalculate_log_x(levels: &mut [Level], compression: f64) {
    if levels.is_empty() {
        return;
    }
    levels[0].log_x = 0.0;
    let c = COMPRESSION_PSEUDO_COUNT;
    for j in 1..levels.len() {
        let below = levels[j - 1].counters;
        let ratio = (below.exceeds as f64 + c / compression) / (below.visits as f64 + c);
        let log_x = levels[j - 1].log_x + ratio.ln();
        // exceeds <= visits keeps ratio < 1; the min guards against a bad merge
        levels[j].log_x = log_x.min(levels[j - 1].log_x);
    }
}

/// Whether the level set is complete.
///
/// With a fixed `max_num_levels` this is a simple count. In automatic mode
/// (`max_num_levels == 0`) at least ten levels are required, after which the
/// set is complete once the mean log-likelihood gap over the most recent (up
/// to twenty) consecutive thresholds falls below 0.8 nats. The prior level's
/// sentinel threshold is excluded from the gaps.
pub fn enough_levels(levels: &[Level], max_num_levels: usize) -> bool {
    if max_num_levels > 0 {
        return levels.len() >= max_num_levels;
    }
    const MIN_LEVELS: usize = 10;
    const MAX_GAPS: usize = 20;
    const GAP_TOLERANCE: f64 = 0.8;
    if levels.len() < MIN_LEVELS {
        return false;
    }
    let num_gaps = MAX_GAPS.min(levels.len() - 2);
    let top = levels.len() - 1;
    let gap_sum = levels[top].threshold.log_l - levels[top - num_gaps].threshold.log_l;
    gap_sum / (num_gaps as f64) < GAP_TOLERANCE
}

/// Likelihood values seen above the current top level, waiting to become the
/// next level's threshold.
#[derive(Debug, Clone, Default)]
pub struct LikelihoodStash {
    values: Vec<LikelihoodValue>,
}

impl LikelihoodStash {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: LikelihoodValue) {
        self.values.push(value);
    }

    pub fn extend(&mut self, values: impl IntoIterator<Item = LikelihoodValue>) {
        self.values.extend(values);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn clear(&mut self) {
        self.values.clear();
    }

    pub fn values(&self) -> &[LikelihoodValue] {
        &self.values
    }
}

/// Creates a new top level once the stash holds `new_level_interval` values
/// and the level set is not complete. The threshold is the `1 - 1/c`
/// quantile of the stash; stashed values above it are kept for the next
/// level. Returns whether a level was created.
pub fn maybe_create_level(
    stash: &mut LikelihoodStash,
    levels: &mut Vec<Level>,
    new_level_interval: usize,
    max_num_levels: usize,
    compression: f64,
) -> bool {
    assert!(!levels.is_empty(), "the prior level must exist");
    if stash.len() < new_level_interval || enough_levels(levels, max_num_levels) {
        return false;
    }
    stash.values.sort_by(LikelihoodValue::total_cmp);
    let index = ((1.0 - 1.0 / compression) * stash.len() as f64).floor() as usize;
    let threshold = stash.values[index.min(stash.len() - 1)];
    let top_log_x = levels[levels.len() - 1].log_x;
    levels.push(Level {
        threshold,
        log_x: top_log_x - compression.ln(),
        counters: LevelCounters::default(),
    });
    stash.values.retain(|v| *v > threshold);
    recalculate_log_x(levels, compression);
    true
}
