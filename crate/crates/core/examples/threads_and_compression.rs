// Several worker threads, each with its own particles, and a fixed number
// of levels spaced by a compression factor of 10 instead of e.

use dnest::models::AnalyticGaussian;
use dnest::postprocess::{postprocess_dir, PostprocessOptions};
use dnest::{Options, Sampler};

pub fn run_example() -> dnest::Result<()> {
    let model = AnalyticGaussian::new(5, 0.1);
    let dir = std::env::temp_dir().join("dnest-example-threads");
    let options = Options {
        num_particles: 2,
        num_threads: 4,
        new_level_interval: 4000,
        save_interval: 1000,
        max_num_levels: 8,
        compression: 10.0,
        max_num_saves: 2000,
        seed: Some(8),
        ..Options::default()
    };
    let mut sampler = Sampler::new(&model, options)?.write_to(&dir)?;
    sampler.run()?;
    println!("{} particles over 4 threads", sampler.particles().len());
    for pair in sampler.levels().windows(2) {
        print!("{:.2} ", pair[1].log_x - pair[0].log_x);
    }
    println!("(nominal {:.2})", -(10f64.ln()));

    let post = postprocess_dir(&dir, &PostprocessOptions { seed: Some(1), ..Default::default() })?;
    println!("{}", post.summary);
    println!("exact log(Z) = {:.4}", model.exact_log_z());
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
