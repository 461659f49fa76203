use super::*;

/// Uniform prior on [0, 1) with a wrapped random-walk proposal and a constant
/// likelihood.
struct Flat {
    log_l: f64,
    log_h: f64,
}

impl Model for Flat {
    type Params = f64;

    fn from_prior(&self, rng: &mut Rng) -> f64 {
        rng.rand()
    }

    fn perturb(&self, x: &f64, rng: &mut Rng) -> (f64, f64) {
        (wrap(x + rng.randh(), 0.0, 1.0), self.log_h)
    }

    fn log_likelihood(&self, _: &f64) -> f64 {
        self.log_l
    }

    fn print(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }

    fn description(&self) -> String {
        "x".into()
    }
}

struct NanModel;

impl Model for NanModel {
    type Params = f64;
    fn from_prior(&self, rng: &mut Rng) -> f64 {
        rng.rand()
    }
    fn perturb(&self, x: &f64, _: &mut Rng) -> (f64, f64) {
        (*x, 0.0)
    }
    fn log_likelihood(&self, x: &f64) -> f64 {
        if *x > 2.0 {
            0.0
        } else {
            f64::NAN
        }
    }
    fn print(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }
    fn description(&self) -> String {
        "x".into()
    }
}

fn particle(x: f64, log_l: f64, tb: f64, level: usize) -> ParticleState<f64> {
    ParticleState {
        params: x,
        log_l,
        tiebreaker: tb,
        level,
    }
}

fn levels_with(thresholds: &[(f64, f64)], spacing: f64) -> Vec<Level> {
    let mut levels = vec![Level::prior()];
    for (i, &(l, t)) in thresholds.iter().enumerate() {
        levels.push(Level {
            threshold: LikelihoodValue::new(l, t),
            log_x: -(i as f64 + 1.0) * spacing,
            counters: LevelCounters::default(),
        });
    }
    levels
}

#[test]
fn minus_infinity_log_h_always_rejects() {
    let model = Flat {
        log_l: 0.0,
        log_h: f64::NEG_INFINITY,
    };
    let levels = vec![Level::prior()];
    let mut counters = vec![LevelCounters::default()];
    let mut rng = Rng::new(1);
    let mut p = particle(0.3, 0.0, 0.4, 0);
    for _ in 0..1000 {
        assert!(!step_particle(&mut p, &model, &levels, &mut counters, &mut rng).unwrap());
    }
    assert_eq!((p.params, p.tiebreaker), (0.3, 0.4));
    assert_eq!(counters[0].tries, 1000);
    assert_eq!(counters[0].accepts, 0);
}

#[test]
fn unconstrained_flat_moves_always_accept() {
    let model = Flat {
        log_l: -3.0,
        log_h: 0.0,
    };
    let levels = vec![Level::prior()];
    let mut counters = vec![LevelCounters::default()];
    let mut rng = Rng::new(2);
    let mut p = particle(0.3, -3.0, 0.4, 0);
    for _ in 0..10_000 {
        assert!(step_particle(&mut p, &model, &levels, &mut counters, &mut rng).unwrap());
    }
    assert_eq!(counters[0].accepts, 10_000);
}

#[test]
fn plateau_acceptance_follows_tiebreaker() {
    let model = Flat {
        log_l: 1.0,
        log_h: 0.0,
    };
    let levels = levels_with(&[(1.0, 0.5)], 1.0);
    let mut counters = vec![LevelCounters::default(); 2];
    let mut rng = Rng::new(3);
    let mut p = particle(0.3, 1.0, 0.7, 1);
    let mut accepted = 0;
    for _ in 0..20_000 {
        let before = p.tiebreaker;
        let ok = step_particle(&mut p, &model, &levels, &mut counters, &mut rng).unwrap();
        if ok {
            accepted += 1;
            assert!(p.tiebreaker > 0.5);
        } else {
            assert_eq!(p.tiebreaker, before);
        }
    }
    // a uniform-like tiebreaker walk restricted to (0.5, 1): some but not all accepted
    assert!(accepted > 1000 && accepted < 20_000, "{accepted}");
}

#[test]
fn nan_likelihood_is_an_error() {
    let levels = vec![Level::prior()];
    let mut counters = vec![LevelCounters::default()];
    let mut rng = Rng::new(4);
    let mut p = particle(0.3, 0.0, 0.5, 0);
    let err = step_particle(&mut p, &NanModel, &levels, &mut counters, &mut rng).unwrap_err();
    assert!(matches!(err, Error::NanValue { .. }));
    assert!(Sampler::new(&NanModel, Options { seed: Some(1), ..Options::default() }).is_err());
}

#[test]
fn level_steps_are_symmetric_and_nonzero() {
    let mut rng = Rng::new(5);
    let mut up = 0;
    let n = 100_000;
    let mut ones = 0;
    for _ in 0..n {
        let d = level_step(&mut rng);
        assert_ne!(d, 0);
        if d > 0 {
            up += 1;
        }
        if d.abs() == 1 {
            ones += 1;
        }
    }
    let f = up as f64 / n as f64;
    assert!((f - 0.5).abs() < 0.01, "{f}");
    assert!(ones > n / 4, "unit steps should be common");
}

#[test]
fn level_move_ratio_examples() {
    let options = Options {
        beta: 0.0,
        ..Options::default()
    };
    let levels = levels_with(&[(1.0, 0.5), (2.0, 0.5), (3.0, 0.5)], 1.0);
    // uniform weights and unit spacing: moving up gains exactly one nat
    let a = level_move_log_ratio(1, 2, &levels, &options, Stage::Exploring);
    assert!((a - 1.0).abs() < 1e-12);
    // building weights add (j' - j)/lambda
    let a = level_move_log_ratio(1, 2, &levels, &options, Stage::Building);
    assert!((a - 1.1).abs() < 1e-12);
    // equal log X, beta off: ratio 0
    let flat = levels_with(&[(1.0, 0.5), (2.0, 0.5)], 0.0);
    assert_eq!(level_move_log_ratio(0, 2, &flat, &options, Stage::Exploring), 0.0);
    // beta pushes towards the less-tried level
    let mut tried = flat.clone();
    tried[0].counters.tries = 99;
    let with_beta = Options {
        beta: 1.0,
        ..Options::default()
    };
    let a = level_move_log_ratio(0, 2, &tried, &with_beta, Stage::Exploring);
    assert!((a - 100f64.ln()).abs() < 1e-12);
    // stage one ignores visit balancing
    let a = level_move_log_ratio(0, 2, &tried, &with_beta, Stage::Building);
    assert!((a - 0.2).abs() < 1e-12);
}

#[test]
fn level_moves_respect_range_and_constraints() {
    let options = Options {
        beta: 0.0,
        ..Options::default()
    };
    let levels = levels_with(&[(1.0, 0.5), (2.0, 0.5)], 0.0);
    let mut rng = Rng::new(6);
    // likelihood between levels 1 and 2: only levels 0 and 1 are reachable,
    // and with equal weights and log X every admissible move is accepted
    let mut p = particle(0.0, 1.5, 0.5, 1);
    let mut seen = [0usize; 3];
    for _ in 0..10_000 {
        let before = p.level;
        let moved = step_level_assignment(&mut p, &levels, &options, Stage::Exploring, &mut rng);
        assert!(p.level <= 1);
        assert_eq!(moved, p.level != before);
        seen[p.level] += 1;
    }
    assert!(seen[0] > 1000 && seen[1] > 1000);
    assert_eq!(seen[2], 0);

    let single = vec![Level::prior()];
    let mut p = particle(0.0, 1.5, 0.5, 0);
    for _ in 0..1000 {
        assert!(!step_level_assignment(&mut p, &single, &options, Stage::Exploring, &mut rng));
    }
}

#[test]
fn visits_and_exceeds() {
    let levels = levels_with(&[(1.0, 0.5), (2.0, 0.5)], 1.0);
    let mut counters = vec![LevelCounters::default(); 3];

    record_visit(&particle(0.0, 5.0, 0.5, 2), &levels, &mut counters);
    assert!(counters.iter().all(|c| *c == LevelCounters::default()));

    record_visit(&particle(0.0, 1.5, 0.5, 1), &levels, &mut counters);
    assert_eq!((counters[1].visits, counters[1].exceeds), (1, 0));

    record_visit(&particle(0.0, 2.5, 0.5, 1), &levels, &mut counters);
    assert_eq!((counters[1].visits, counters[1].exceeds), (2, 1));

    // ties on log L are broken by the tiebreaker
    record_visit(&particle(0.0, 2.0, 0.6, 1), &levels, &mut counters);
    record_visit(&particle(0.0, 2.0, 0.4, 1), &levels, &mut counters);
    assert_eq!((counters[1].visits, counters[1].exceeds), (4, 2));
}

#[test]
fn single_level_runs_never_create_levels() {
    let model = Flat {
        log_l: 0.0,
        log_h: 0.0,
    };
    let options = Options {
        max_num_levels: 1,
        new_level_interval: 100,
        save_interval: 100,
        thread_steps: 10,
        max_num_saves: 50,
        seed: Some(9),
        ..Options::default()
    };
    let mut sampler = Sampler::new(&model, options).unwrap();
    let summary = sampler.run().unwrap();
    assert_eq!(summary.num_levels, 1);
    assert_eq!(summary.num_saves, 50);
    assert_eq!(summary.mcmc_steps, 5000);
}

#[test]
fn levels_are_ordered_and_compressed() {
    // L(x) = x on a uniform prior
    struct Ramp;
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
            "x".into()
        }
    }
    let options = Options {
        max_num_levels: 8,
        new_level_interval: 1000,
        save_interval: 1000,
        thread_steps: 100,
        max_num_saves: 100,
        seed: Some(10),
        ..Options::default()
    };
    let mut sampler = Sampler::new(&Ramp, options).unwrap();
    sampler.run().unwrap();
    let levels = sampler.levels();
    assert_eq!(levels.len(), 8);
    for w in levels.windows(2) {
        assert!(w[1].threshold > w[0].threshold);
        assert!(w[1].log_x < w[0].log_x);
    }
    for (j, level) in levels.iter().enumerate().skip(1) {
        let exact = (-level.threshold.log_l.exp_m1()).ln();
        assert!((level.log_x - exact).abs() < 0.5, "level {j}: {} vs {exact}", level.log_x);
        assert!(level.counters.exceeds <= level.counters.visits);
        assert!(level.counters.accepts <= level.counters.tries);
    }
    for p in sampler.particles() {
        assert!(admits(levels, p.level, p.likelihood()));
    }

}
