// Gaussian mixture with an unknown number of components, fitted to galaxy
// velocities. A full run needs about 10^7 MCMC steps; this one is short and
// only shows the workflow. Pass `full` for the long version.

use dnest::models::{data_dir, Mixture};
use dnest::postprocess::{postprocess_dir, PostprocessOptions, RunFiles};
use dnest::rjobject::parse_printed;
use dnest::{Options, Sampler};

fn fit(full: bool) -> dnest::Result<()> {
    let model = Mixture::load(data_dir().join("galaxies.txt"))?;
    let dir = std::env::temp_dir().join("dnest-example-galaxies");
    let options = if full {
        Options {
            seed: Some(1),
            max_num_saves: 1000,
            ..Options::default()
        }
    } else {
        Options {
            new_level_interval: 1000,
            save_interval: 1000,
            max_num_levels: 15,
            max_num_saves: 300,
            seed: Some(1),
            ..Options::default()
        }
    };
    Sampler::new(&model, options)?.write_to(&dir)?.run()?;
    let post = postprocess_dir(&dir, &PostprocessOptions { seed: Some(1), ..Default::default() })?;
    println!("{}", post.summary);

    // posterior for the number of components
    let files = RunFiles::read(&dir)?;
    let mut counts = vec![0usize; Mixture::MAX_COMPONENTS + 1];
    for &r in &post.posterior_rows {
        let (n, _) = parse_printed(&files.samples[r], 5).expect("mixture row");
        counts[n] += 1;
    }
    for (n, c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        println!("N = {n:>3}: {c}");
    }
    Ok(())
}

pub fn run_example() -> dnest::Result<()> {
    fit(false)
}

fn main() -> dnest::Result<()> {
    fit(std::env::args().nth(1).as_deref() == Some("full"))
}
