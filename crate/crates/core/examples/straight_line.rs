// Linear regression on the bundled 50-point dataset: evidence, information
// and posterior summaries for slope, intercept and noise level.

use dnest::models::{data_dir, StraightLine};
use dnest::postprocess::{postprocess_dir, PostprocessOptions, RunFiles};
use dnest::{Options, Sampler};

pub fn run_example() -> dnest::Result<()> {
    let model = StraightLine::load(data_dir().join("straight_line.txt"))?;
    let dir = std::env::temp_dir().join("dnest-example-straight-line");
    let options = Options {
        new_level_interval: 5000,
        save_interval: 1000,
        max_num_saves: 1000,
        seed: Some(2016),
        ..Options::default()
    };
    let run = Sampler::new(&model, options)?.write_to(&dir)?.run()?;
    println!("{} levels after {} MCMC steps", run.num_levels, run.mcmc_steps);

    let post = postprocess_dir(&dir, &PostprocessOptions { seed: Some(1), ..Default::default() })?;
    println!("{}", post.summary);

    let files = RunFiles::read(&dir)?;
    let rows = &post.posterior_rows;
    for (i, name) in ["m", "b", "sigma"].iter().enumerate() {
        let xs: Vec<f64> = rows.iter().map(|&r| files.samples[r][i]).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
        println!("{name:>5} = {mean:.3} +- {sd:.3}");
    }
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
