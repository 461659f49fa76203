//! The `dnest` command line: run a bundled model, then postprocess its
//! output.
//!
//! ```text
//! dnest run straightline -o OPTIONS -s 1234 -t 4
//! dnest postprocess
//! dnest postprocess-abc --threshold-fraction 0.8
//! dnest diagnostics
//! ```

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::models::{data_dir, AbcNormal, AnalyticGaussian, Mixture, StraightLine};
use crate::postprocess::{self, AbcOptions, PostprocessOptions, RunFiles};
use crate::sampler::{Options, Sampler};

/// Number of values in an `OPTIONS` file.
pub const NUM_OPTION_VALUES: usize = 8;

/// Parses the eight-value `OPTIONS` format: one number per line, in the
/// order particles, new level interval, save interval, thread steps, max
/// levels, lambda, beta, max saves. `#` starts a comment anywhere on a line.
pub fn parse_options(text: &str) -> Result<Options> {
    parse_options_named(text, Path::new("OPTIONS"))
}

pub fn parse_options_file(path: impl AsRef<Path>) -> Result<Options> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_options_named(&text, path)
}

fn parse_options_named(text: &str, path: &Path) -> Result<Options> {
    let parse_error = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut values = Vec::with_capacity(NUM_OPTION_VALUES);
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if values.len() == NUM_OPTION_VALUES {
            return Err(parse_error(
                i + 1,
                format!("expected {NUM_OPTION_VALUES} option values, found more"),
            ));
        }
        let mut tokens = content.split_whitespace();
        let token = tokens.next().expect("non-empty");
        if tokens.next().is_some() {
            return Err(parse_error(i + 1, format!("expected one value, found `{content}`")));
        }
        let value: f64 = token
            .parse()
            .map_err(|_| parse_error(i + 1, format!("`{token}` is not a number")))?;
        let is_count = !matches!(values.len(), 5 | 6);
        if is_count && (value < 0.0 || value.fract() != 0.0) {
            return Err(parse_error(
                i + 1,
                format!("`{token}` must be a non-negative integer"),
            ));
        }
        values.push((value, i + 1));
    }
    if values.len() < NUM_OPTION_VALUES {
        return Err(parse_error(
            last_line,
            format!(
                "expected {NUM_OPTION_VALUES} option values, found {}",
                values.len()
            ),
        ));
    }
    let count = |k: usize| values[k].0 as usize;
    let options = Options {
        num_particles: count(0),
        new_level_interval: count(1),
        save_interval: count(2),
        thread_steps: count(3),
        max_num_levels: count(4),
        lambda: values[5].0,
        beta: values[6].0,
        max_num_saves: count(7),
        ..Options::default()
    };
    options
        .validate()
        .map_err(|e| parse_error(values[NUM_OPTION_VALUES - 1].1, e.to_string()))?;
    Ok(options)
}

#[derive(Debug, Parser)]
#[command(name = "dnest", version, about = "Diffusive Nested Sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the sampler on a bundled model.
    Run(RunArgs),
    /// Print log(Z), information and effective sample size, and write
    /// posterior samples and diagnostics.
    Postprocess(PostprocessArgs),
    /// Draw ABC posterior samples at a tolerance level.
    PostprocessAbc(AbcArgs),
    /// Write the diagnostic CSV files only.
    Diagnostics(DirArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    /// Linear regression with unknown slope, intercept and noise.
    Straightline,
    /// Gaussian likelihood and prior with a closed-form evidence.
    Gaussian,
    /// One-dimensional Gaussian mixture with an unknown number of components.
    Mixture,
    /// ABC for the mean and standard deviation of a normal sample.
    Abc,
}

impl ModelName {
    pub fn default_data_file(self) -> Option<&'static str> {
        match self {
            ModelName::Straightline => Some("straight_line.txt"),
            ModelName::Gaussian => None,
            ModelName::Mixture => Some("galaxies.txt"),
            ModelName::Abc => Some("abc_normal.txt"),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub model: ModelName,
    /// OPTIONS file; `./OPTIONS` is used when present, else built-in defaults.
    #[arg(short = 'o', long = "options")]
    pub options: Option<PathBuf>,
    /// Random seed; the system time when absent.
    #[arg(short = 's', long)]
    pub seed: Option<u64>,
    /// Data file for the model.
    #[arg(short = 'd', long = "data")]
    pub data: Option<PathBuf>,
    /// Compression factor between levels; requires a fixed number of levels.
    #[arg(short = 'c', long)]
    pub compression: Option<f64>,
    /// Number of threads, each with its own particles.
    #[arg(short = 't', long)]
    pub threads: Option<usize>,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
    /// Dimension of the Gaussian model.
    #[arg(long, default_value_t = 5)]
    pub dim: usize,
    /// Likelihood width of the Gaussian model.
    #[arg(long, default_value_t = 0.1)]
    pub width: f64,
}

#[derive(Debug, Args)]
pub struct DirArgs {
    /// Directory holding the run files.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct PostprocessArgs {
    #[command(flatten)]
    pub dir: DirArgs,
    /// Seed for resampling.
    #[arg(short = 's', long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AbcArgs {
    #[command(flatten)]
    pub dir: DirArgs,
    #[arg(long, default_value_t = 0.8)]
    pub threshold_fraction: f64,
    #[arg(short = 's', long)]
    pub seed: Option<u64>,
}

/// Combines built-in defaults, the OPTIONS file and command-line flags, in
/// increasing order of precedence.
pub fn resolve_options(args: &RunArgs) -> Result<Options> {
    let mut options = match &args.options {
        Some(path) => parse_options_file(path)?,
        None if Path::new("OPTIONS").is_file() => parse_options_file("OPTIONS")?,
        None => Options::default(),
    };
    if let Some(seed) = args.seed {
        options.seed = Some(seed);
    }
    if let Some(c) = args.compression {
        options.compression = c;
    }
    if let Some(t) = args.threads {
        options.num_threads = t;
    }
    options.data_path = args
        .data
        .clone()
        .or_else(|| args.model.default_data_file().map(|f| data_dir().join(f)));
    options.validate()?;
    Ok(options)
}

fn sample<M: Model, W: Write + Send>(model: &M, options: Options, dir: &Path, out: &mut W) -> Result<()> {
    let summary = Sampler::new(model, options)?
        .write_to(dir)?
        .with_progress(&mut *out)
        .run()?;
    writeln!(
        out,
        "# Finished: {} saves, {} levels, {} MCMC steps.",
        summary.num_saves, summary.num_levels, summary.mcmc_steps
    )
    .map_err(|e| Error::io("<stdout>", e))
}

fn data_path(options: &Options) -> Result<&Path> {
    options
        .data_path
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("this model needs a data file (-d)".into()))
}

pub fn run_model<W: Write + Send>(args: &RunArgs, out: &mut W) -> Result<()> {
    let options = resolve_options(args)?;
    match args.model {
        ModelName::Straightline => {
            let model = StraightLine::load(data_path(&options)?)?;
            sample(&model, options, &args.dir, out)
        }
        ModelName::Gaussian => {
            if args.dim == 0 || !(args.width > 0.0) {
                return Err(Error::InvalidArgument("--dim must be >= 1 and --width > 0".into()));
            }
            let model = AnalyticGaussian::new(args.dim, args.width);
            sample(&model, options, &args.dir, out)
        }
        ModelName::Mixture => {
            let model = Mixture::load(data_path(&options)?)?;
            sample(&model, options, &args.dir, out)
        }
        ModelName::Abc => {
            let model = AbcNormal::load(data_path(&options)?)?;
            sample(&model, options, &args.dir, out)
        }
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Executes a parsed command, writing messages to `out`.
pub fn execute<W: Write + Send>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Run(args) => run_model(args, out),
        Command::Postprocess(args) => {
            let options = PostprocessOptions {
                seed: args.seed,
                ..PostprocessOptions::default()
            };
            let result = postprocess::postprocess_dir(&args.dir.dir, &options)?;
            for k in &result.empty_levels {
                writeln!(out, "# Warning: no samples in the slab of level {k}; merged with a neighbour.")
                    .map_err(io_out)?;
            }
            writeln!(out, "{}", result.summary).map_err(io_out)
        }
        Command::PostprocessAbc(args) => {
            let files = RunFiles::read(&args.dir.dir)?;
            let options = AbcOptions {
                threshold_fraction: args.threshold_fraction,
                seed: args.seed,
                write_posterior: true,
            };
            let abc = postprocess::postprocess_abc(&files, &options)?;
            writeln!(out, "{abc}").map_err(io_out)
        }
        Command::Diagnostics(args) => {
            let files = RunFiles::read(&args.dir)?;
            let (samples, _, _) = postprocess::weigh_samples(&files.info, &files.levels)?;
            postprocess::emit_diagnostics(&files, &samples)
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit status; usage errors print to stderr.
pub fn main_with_args<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write + Send,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dnest: {e}");
            1
        }
    }
}
