// Writing a model: a bimodal "spike and slab" on [-1/2, 1/2]^10 whose
// narrow spike holds most of the posterior mass but little prior mass. The
// sampler is driven one window at a time to watch the levels form.

use dnest::postprocess::{postprocess_dir, PostprocessOptions};
use dnest::{wrap, Model, Options, Rng, Sampler};

const DIM: usize = 10;
const SLAB: f64 = 0.1;
const SPIKE: f64 = 0.01;

struct SpikeSlab;

fn log_normal_sum(x: &[f64], centre: f64, width: f64) -> f64 {
    let norm = -0.5 * (2.0 * std::f64::consts::PI * width * width).ln();
    x.iter().map(|v| norm - 0.5 * ((v - centre) / width).powi(2)).sum()
}

impl Model for SpikeSlab {
    type Params = Vec<f64>;

    fn from_prior(&self, rng: &mut Rng) -> Vec<f64> {
        (0..DIM).map(|_| rng.rand() - 0.5).collect()
    }

    fn perturb(&self, x: &Vec<f64>, rng: &mut Rng) -> (Vec<f64>, f64) {
        let mut y = x.clone();
        let reps = if rng.rand() < 0.5 { 1 } else { 1 + rng.rand_int(DIM) };
        for _ in 0..reps {
            let i = rng.rand_int(DIM);
            y[i] = wrap(y[i] + rng.randh(), -0.5, 0.5);
        }
        (y, 0.0)
    }

    fn log_likelihood(&self, x: &Vec<f64>) -> f64 {
        let slab = log_normal_sum(x, 0.0, SLAB);
        let spike = log_normal_sum(x, 0.031, SPIKE) + 100f64.ln();
        let max = slab.max(spike);
        max + ((slab - max).exp() + (spike - max).exp()).ln()
    }

    fn print(&self, x: &Vec<f64>) -> Vec<f64> {
        x.clone()
    }

    fn description(&self) -> String {
        (0..DIM).map(|i| format!("x{i}")).collect::<Vec<_>>().join(", ")
    }
}

pub fn run_example() -> dnest::Result<()> {
    let dir = std::env::temp_dir().join("dnest-example-custom");
    let options = Options {
        new_level_interval: 5000,
        save_interval: 1000,
        max_num_levels: 60,
        max_num_saves: 4000,
        seed: Some(5),
        ..Options::default()
    };
    let mut sampler = Sampler::new(&SpikeSlab, options)?.write_to(&dir)?;
    let mut shown = 0;
    while sampler.num_saves() < 4000 {
        sampler.step_window()?;
        if sampler.levels().len() >= shown + 20 {
            shown = sampler.levels().len();
            let top = sampler.levels().last().expect("level 0 always exists");
            println!(
                "{shown} levels after {} saves: top log L {:.2} at log X {:.2}",
                sampler.num_saves(),
                top.threshold.log_l,
                top.log_x
            );
        }
    }

    let post = postprocess_dir(&dir, &PostprocessOptions { seed: Some(1), ..Default::default() })?;
    println!("{}", post.summary);
    // the slab integrates to 1 and the spike to 100 (both lose < 1e-6 to truncation)
    println!("exact log(Z) = {:.4}", 101f64.ln());
    Ok(())
}

fn main() -> dnest::Result<()> {
    run_example()
}
