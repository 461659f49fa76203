// Approximate Bayesian computation: infer the mean and standard deviation of
// a normal sample from its minimum and maximum alone. The levels sweep the
// discrepancy down, and any level can serve as the ABC tolerance.

use dnest::models::{data_dir, AbcNormal};
use dnest::postprocess::{postprocess_abc, AbcOptions, RunFiles};
use dnest::{Options, Sampler};

pub fn run_example() -> dnest::Result<()> {
    let model = AbcNormal::load(data_dir().join("abc_normal.txt"))?;
    let dir = std::env::temp_dir().join("dnest-example-abc");
    let options = Options {
        save_interval: 1000,
        max_num_levels: 30,
        max_num_saves: 2000,
        seed: Some(11),
        ..Options::default()
    };
    Sampler::new(&model, options)?.write_to(&dir)?.run()?;

    let files = RunFiles::read(&dir)?;
    for fraction in [0.5, 0.8, 1.0] {
        let abc = postprocess_abc(
            &files,
            &AbcOptions {
                threshold_fraction: fraction,
                seed: Some(1),
                write_posterior: false,
            },
        )?;
        let n = abc.posterior_rows.len() as f64;
        let mean = |i: usize| abc.posterior_rows.iter().map(|&r| files.samples[r][i]).sum::<f64>() / n;
        println!(
            "fraction {fraction}: level {}, epsilon {:.4}, ln P(rho < epsilon) {:.2}, mu ~ {:.3}, sigma ~ {:.3}",
            abc.level,
            abc.epsilon,
            abc.log_x,
            mean(0),
            mean(1)
        );
    }
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
