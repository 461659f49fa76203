// Postprocessing while a run is in progress: the run files are readable at
// any time, and the diagnostics CSVs feed the plotting scripts.

use dnest::models::AnalyticGaussian;
use dnest::postprocess::{
    emit_diagnostics, postprocess, weigh_samples, PostprocessOptions, RunFiles, LEVELS_DIAG_FILE, TRACE_FILE,
    WEIGHTS_FILE,
};
use dnest::{Options, Sampler};

pub fn run_example() -> dnest::Result<()> {
    let model = AnalyticGaussian::new(4, 0.2);
    let dir = std::env::temp_dir().join("dnest-example-live");
    let options = Options {
        new_level_interval: 2000,
        save_interval: 500,
        max_num_saves: 600,
        seed: Some(3),
        ..Options::default()
    };
    let mut sampler = Sampler::new(&model, options)?.write_to(&dir)?;
    let mut reported = 0;
    while sampler.num_saves() < 600 {
        sampler.step_window()?;
        let saves = sampler.num_saves();
        if saves >= reported + 200 {
            reported = saves;
            let files = RunFiles::read(&dir)?;
            let quiet = PostprocessOptions {
                seed: Some(1),
                write_posterior: false,
                write_diagnostics: false,
            };
            let s = postprocess(&files, &quiet)?.summary;
            println!(
                "{saves} saves, {} levels: log(Z) = {:.3}, H = {:.3}",
                files.levels.len(),
                s.log_z,
                s.information
            );
        }
    }

    let files = RunFiles::read(&dir)?;
    let (samples, _, _) = weigh_samples(&files.info, &files.levels)?;
    emit_diagnostics(&files, &samples)?;
    for name in [TRACE_FILE, LEVELS_DIAG_FILE, WEIGHTS_FILE] {
        let text = std::fs::read_to_string(dir.join(name)).map_err(|e| dnest::Error::io(dir.join(name), e))?;
        println!("{name}: {} rows", text.lines().count() - 1);
    }
    println!("exact log(Z) = {:.3}", model.exact_log_z());
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
