//! The Diffusive Nested Sampling engine.
//!
//! Each particle carries a point `θ` and a level index `j` and explores the
//! joint target `p(θ, j) ∝ w_j π(θ) 1[L(θ) > ℓ_j] / X_j`, whose `θ` marginal
//! is a mixture of likelihood-constrained priors. In the first stage the
//! weights `w_j ∝ exp(j/λ)` push particles upwards while new levels are
//! created from the `1 - 1/c` quantile of likelihoods seen above the top
//! level. Once the level set is complete the weights become uniform and the
//! run keeps refining each level's ln X from exceeds/visits counts.
//!
//! Worker threads own disjoint particle sets. Every `thread_steps` steps they
//! pool their counters and stashed likelihoods at a barrier, where levels are
//! created, ln X values refreshed and particles saved. Results are merged in
//! thread order, so a seeded run is reproducible for any thread count.

mod level;
mod options;
pub(crate) mod output;

use std::io::Write;
use std::path::Path;

pub use level::{
    admits, enough_levels, level_weight, maybe_create_level, recalculate_log_x, Level,
    LevelCounters, LikelihoodStash, Stage, COMPRESSION_PSEUDO_COUNT, PRIOR_LOG_L,
};
pub use options::Options;
pub use output::{
    LEVELS_FILE, LEVELS_HEADER, SAMPLE_FILE, SAMPLE_INFO_FILE, SAMPLE_INFO_HEADER,
};

use crate::error::{Error, Result};
use crate::model::{format_fields, LikelihoodValue, Model};
use crate::rng::{wrap, Rng};
use output::OutputFiles;

/// One particle: a point, its cached log-likelihood, a tiebreaker and a level.
#[derive(Debug, Clone)]
pub struct ParticleState<P> {
    pub params: P,
    pub log_l: f64,
    pub tiebreaker: f64,
    pub level: usize,
}

impl<P> ParticleState<P> {
    pub fn likelihood(&self) -> LikelihoodValue {
        LikelihoodValue::new(self.log_l, self.tiebreaker)
    }
}

fn nan_error<M: Model>(model: &M, params: &M::Params, what: &'static str) -> Error {
    Error::NanValue {
        what,
        params: format_fields(&model.print(params)),
    }
}

/// Metropolis update of `θ` (and the tiebreaker) within the particle's level.
///
/// The proposal comes from [`Model::perturb`]; the tiebreaker moves by a
/// wrapped heavy-tailed step. The move is accepted with probability
/// `min(1, H)` provided the proposed likelihood value is still inside the
/// level. Returns whether the move was accepted.
pub fn step_particle<M: Model>(
    particle: &mut ParticleState<M::Params>,
    model: &M,
    levels: &[Level],
    counters: &mut [LevelCounters],
    rng: &mut Rng,
) -> Result<bool> {
    let j = particle.level;
    let (proposal, log_h) = model.perturb(&particle.params, rng);
    if log_h.is_nan() {
        return Err(nan_error(model, &particle.params, "log H from perturb"));
    }
    let tiebreaker = wrap(particle.tiebreaker + rng.randh(), 0.0, 1.0);
    counters[j].tries += 1;

    let u = rng.rand();
    if !(u < log_h.min(0.0).exp()) {
        return Ok(false);
    }
    let log_l = model.log_likelihood(&proposal);
    if log_l.is_nan() {
        return Err(nan_error(model, &proposal, "log-likelihood"));
    }
    if !admits(levels, j, LikelihoodValue::new(log_l, tiebreaker)) {
        return Ok(false);
    }
    particle.params = proposal;
    particle.log_l = log_l;
    particle.tiebreaker = tiebreaker;
    counters[j].accepts += 1;
    Ok(true)
}

/// Symmetric heavy-tailed nonzero integer step used for level moves.
pub fn level_step(rng: &mut Rng) -> i64 {
    let magnitude = (10f64.powf(2.0 * rng.rand()) * rng.randn()).abs().floor();
    let magnitude = (magnitude as i64).max(1);
    if rng.rand() < 0.5 {
        -magnitude
    } else {
        magnitude
    }
}

/// Log acceptance ratio for moving a particle with fixed `θ` from level `from`
/// to level `to`, before the min with 0.
pub fn level_move_log_ratio(
    from: usize,
    to: usize,
    levels: &[Level],
    options: &Options,
    stage: Stage,
) -> f64 {
    let n = levels.len();
    let mut log_a = level_weight(to, n, options.lambda, stage)
        - level_weight(from, n, options.lambda, stage)
        + levels[from].log_x
        - levels[to].log_x;
    if stage == Stage::Exploring && options.beta > 0.0 {
        let tries_from = levels[from].counters.tries as f64;
        let tries_to = levels[to].counters.tries as f64;
        log_a += options.beta * ((tries_from + 1.0) / (tries_to + 1.0)).ln();
    }
    log_a
}

/// Metropolis update of the particle's level index with `θ` held fixed.
/// Returns whether the particle moved.
pub fn step_level_assignment<P>(
    particle: &mut ParticleState<P>,
    levels: &[Level],
    options: &Options,
    stage: Stage,
    rng: &mut Rng,
) -> bool {
    let proposed = particle.level as i64 + level_step(rng);
    if proposed < 0 || proposed >= levels.len() as i64 {
        return false;
    }
    let proposed = proposed as usize;
    if !admits(levels, proposed, particle.likelihood()) {
        return false;
    }
    let log_a = level_move_log_ratio(particle.level, proposed, levels, options, stage);
    if rng.rand() < log_a.min(0.0).exp() {
        particle.level = proposed;
        true
    } else {
        false
    }
}

/// Counts a visit to the particle's level (once the next level exists) and
/// whether the particle also lies above that next level.
pub fn record_visit<P>(
    particle: &ParticleState<P>,
    levels: &[Level],
    counters: &mut [LevelCounters],
) {
    let j = particle.level;
    if j + 1 < levels.len() {
        counters[j].visits += 1;
        if particle.likelihood() > levels[j + 1].threshold {
            counters[j].exceeds += 1;
        }
    }
}

/// Everything a worker produces during one pooling window.
struct WindowResult {
    counters: Vec<LevelCounters>,
    stash: Vec<LikelihoodValue>,
}

#[allow(clippy::too_many_arguments)]
fn run_window<M: Model>(
    model: &M,
    particles: &mut [ParticleState<M::Params>],
    rng: &mut Rng,
    levels: &[Level],
    options: &Options,
    stage: Stage,
    steps: usize,
) -> Result<WindowResult> {
    let mut counters = vec![LevelCounters::default(); levels.len()];
    let mut stash = Vec::new();
    let top = levels.len() - 1;
    for _ in 0..steps {
        let which = rng.rand_int(particles.len());
        let particle = &mut particles[which];
        if rng.rand() < 0.5 {
            step_particle(particle, model, levels, &mut counters, rng)?;
            step_level_assignment(particle, levels, options, stage, rng);
        } else {
            step_level_assignment(particle, levels, options, stage, rng);
            step_particle(particle, model, levels, &mut counters, rng)?;
        }
        record_visit(particle, levels, &mut counters);
        if stage == Stage::Building && particle.likelihood() > levels[top].threshold {
            stash.push(particle.likelihood());
        }
    }
    Ok(WindowResult { counters, stash })
}

/// What a finished (or interrupted) run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub num_levels: usize,
    pub num_saves: usize,
    pub mcmc_steps: u64,
}

/// A Diffusive Nested Sampling run over one model.
pub struct Sampler<'m, M: Model> {
    model: &'m M,
    options: Options,
    seed: u64,
    levels: Vec<Level>,
    particles: Vec<ParticleState<M::Params>>,
    thread_rngs: Vec<Rng>,
    rng: Rng,
    stash: LikelihoodStash,
    output: Option<OutputFiles>,
    progress: Option<Box<dyn Write + Send + 'm>>,
    mcmc_steps: u64,
    steps_since_save: u64,
    num_saves: usize,
}

impl<'m, M: Model> Sampler<'m, M> {
    /// Validates the options and draws the initial particles from the prior,
    /// all at level 0 with uniform tiebreakers.
    pub fn new(model: &'m M, options: Options) -> Result<Self> {
        options.validate()?;
        let seed = options.seed.unwrap_or_else(Rng::time_seed);
        let threads = options.num_threads;
        // stream 0 coordinates; stream t + 1 belongs to worker t
        let mut rng = Rng::for_stream(seed, 0);
        let thread_rngs: Vec<Rng> = (0..threads)
            .map(|t| Rng::for_stream(seed, t as u64 + 1))
            .collect();
        let mut particles = Vec::with_capacity(threads * options.num_particles);
        for _ in 0..threads * options.num_particles {
            let params = model.from_prior(&mut rng);
            let log_l = model.log_likelihood(&params);
            if log_l.is_nan() {
                return Err(nan_error(model, &params, "log-likelihood"));
            }
            particles.push(ParticleState {
                params,
                log_l,
                tiebreaker: rng.rand(),
                level: 0,
            });
        }
        Ok(Sampler {
            model,
            options,
            seed,
            levels: vec![Level::prior()],
            particles,
            thread_rngs,
            rng,
            stash: LikelihoodStash::new(),
            output: None,
            progress: None,
            mcmc_steps: 0,
            steps_since_save: 0,
            num_saves: 0,
        })
    }

    /// Writes `sample.txt`, `sample_info.txt` and `levels.txt` into `dir`,
    /// truncating any previous run there.
    pub fn write_to(mut self, dir: impl AsRef<Path>) -> Result<Self> {
        let output = OutputFiles::create(dir.as_ref(), &self.model.description())?;
        output.write_levels(&self.levels)?;
        self.output = Some(output);
        Ok(self)
    }

    /// Sends progress messages (level creation, saves) to `out`.
    pub fn with_progress(mut self, out: impl Write + Send + 'm) -> Self {
        self.progress = Some(Box::new(out));
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn particles(&self) -> &[ParticleState<M::Params>] {
        &self.particles
    }

    pub fn num_saves(&self) -> usize {
        self.num_saves
    }

    pub fn stage(&self) -> Stage {
        if enough_levels(&self.levels, self.options.max_num_levels) {
            Stage::Exploring
        } else {
            Stage::Building
        }
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary {
            seed: self.seed,
            num_levels: self.levels.len(),
            num_saves: self.num_saves,
            mcmc_steps: self.mcmc_steps,
        }
    }

    fn say(&mut self, msg: std::fmt::Arguments) {
        if let Some(out) = self.progress.as_mut() {
            // progress output is best effort
            let _ = writeln!(out, "{msg}");
        }
    }

    fn finished(&self) -> bool {
        self.options.max_num_saves > 0 && self.num_saves >= self.options.max_num_saves
    }

    /// Runs until `max_num_saves` particles have been saved (forever when it
    /// is 0).
    pub fn run(&mut self) -> Result<RunSummary> {
        let seed = self.seed;
        self.say(format_args!("# Seeding random number generators with {seed}."));
        while !self.finished() {
            self.step_window()?;
        }
        if let Some(out) = self.progress.as_mut() {
            let _ = out.flush();
        }
        Ok(self.summary())
    }

    /// Advances every thread by `thread_steps` MCMC steps, then pools the
    /// results, creates levels and saves particles that are due.
    pub fn step_window(&mut self) -> Result<()> {
        let stage = self.stage();
        let steps = self.options.thread_steps;
        let per_thread = self.options.num_particles;
        let model = self.model;
        let levels = &self.levels;
        let options = &self.options;

        let results: Vec<Result<WindowResult>> = if self.thread_rngs.len() == 1 {
            vec![run_window(
                model,
                &mut self.particles,
                &mut self.thread_rngs[0],
                levels,
                options,
                stage,
                steps,
            )]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = self
                    .particles
                    .chunks_mut(per_thread)
                    .zip(self.thread_rngs.iter_mut())
                    .map(|(chunk, rng)| {
                        scope.spawn(move || {
                            run_window(model, chunk, rng, levels, options, stage, steps)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sampler worker panicked"))
                    .collect()
            })
        };

        for result in results {
            let result = result?;
            for (level, delta) in self.levels.iter_mut().zip(&result.counters) {
                level.counters.add(delta);
            }
            if stage == Stage::Building {
                self.stash.extend(result.stash);
            }
        }

        let c = self.options.compression;
        while maybe_create_level(
            &mut self.stash,
            &mut self.levels,
            self.options.new_level_interval,
            self.options.max_num_levels,
            c,
        ) {
            let top = self.levels.len() - 1;
            let lv = self.levels[top].threshold;
            self.say(format_args!(
                "# Creating level {top} with log likelihood = {}.",
                lv.log_l
            ));
        }
        if stage == Stage::Building && self.stage() == Stage::Exploring {
            self.stash.clear();
            let n = self.levels.len();
            self.say(format_args!("# Done creating levels ({n} levels)."));
        }
        recalculate_log_x(&mut self.levels, c);

        let window_steps = (steps * self.thread_rngs.len()) as u64;
        self.mcmc_steps += window_steps;
        self.steps_since_save += window_steps;
        let interval = self.options.save_interval as u64;
        while self.steps_since_save >= interval && !self.finished() {
            self.steps_since_save -= interval;
            self.save()?;
        }
        Ok(())
    }

    /// Saves one particle chosen uniformly at random and rewrites levels.txt.
    fn save(&mut self) -> Result<()> {
        let which = self.rng.rand_int(self.particles.len());
        let thread = which / self.options.num_particles;
        let particle = &self.particles[which];
        if let Some(output) = self.output.as_mut() {
            output.append_sample(
                &self.model.print(&particle.params),
                particle.level,
                particle.log_l,
                particle.tiebreaker,
                thread,
            )?;
            output.write_levels(&self.levels)?;
        }
        self.num_saves += 1;
        let n = self.num_saves;
        self.say(format_args!("Saving a particle to disk. N = {n}."));
        Ok(())
    }
}

#[cfg(test)]
mod tests;
