// Evidence for a model whose answer is known in closed form: a 5-D unit
// Gaussian prior and a narrow Gaussian likelihood.

use dnest::models::AnalyticGaussian;
use dnest::postprocess::{postprocess_dir, PostprocessOptions};
use dnest::{Options, Sampler};

pub fn run_example() -> dnest::Result<()> {
    let model = AnalyticGaussian::new(5, 0.1);
    let dir = std::env::temp_dir().join("dnest-example-gaussian");
    let options = Options {
        num_particles: 5,
        new_level_interval: 2000,
        save_interval: 500,
        thread_steps: 100,
        max_num_levels: 0,
        max_num_saves: 2000,
        seed: Some(42),
        ..Options::default()
    };
    let run = Sampler::new(&model, options)?.write_to(&dir)?.run()?;
    println!("{} levels, {} MCMC steps", run.num_levels, run.mcmc_steps);

    let post = postprocess_dir(
        &dir,
        &PostprocessOptions {
            seed: Some(1),
            ..PostprocessOptions::default()
        },
    )?;
    println!("{}", post.summary);
    println!("exact log(Z) = {}", model.exact_log_z());
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
