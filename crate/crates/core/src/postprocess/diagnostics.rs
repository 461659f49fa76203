//! CSV files for plotting: the level trace, per-level compression and
//! acceptance, and the likelihood curve with posterior weights.

use std::fmt::Write as _;

use super::{RunFiles, WeightedSample};
use crate::error::{Error, Result};
use crate::model::format_real;

pub const TRACE_FILE: &str = "trace.csv";
pub const LEVELS_DIAG_FILE: &str = "levels_diag.csv";
pub const WEIGHTS_FILE: &str = "weights.csv";

/// Writes `trace.csv` (save, level), `levels_diag.csv` (level, delta_log_x,
/// acceptance) and `weights.csv` (log_x, log_l, weight, sorted by log_x).
pub fn emit_diagnostics(files: &RunFiles, samples: &[WeightedSample]) -> Result<()> {
    let mut trace = String::from("save,level\n");
    for (i, s) in files.info.iter().enumerate() {
        writeln!(trace, "{i},{}", s.level).expect("write to string");
    }

    let mut levels = String::from("level,delta_log_x,acceptance\n");
    for (j, pair) in files.levels.windows(2).enumerate() {
        let c = &pair[0].counters;
        let acceptance = if c.tries == 0 {
            0.0
        } else {
            c.accepts as f64 / c.tries as f64
        };
        writeln!(
            levels,
            "{j},{},{}",
            format_real(pair[1].log_x - pair[0].log_x),
            format_real(acceptance)
        )
        .expect("write to string");
    }

    let mut sorted: Vec<&WeightedSample> = samples.iter().collect();
    sorted.sort_by(|a, b| a.log_x.total_cmp(&b.log_x));
    let mut weights = String::from("log_x,log_l,weight\n");
    for s in sorted {
        writeln!(
            weights,
            "{},{},{}",
            format_real(s.log_x),
            format_real(s.log_l),
            format_real(s.log_posterior_weight.exp())
        )
        .expect("write to string");
    }

    for (name, text) in [(TRACE_FILE, trace), (LEVELS_DIAG_FILE, levels), (WEIGHTS_FILE, weights)] {
        let path = files.dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
