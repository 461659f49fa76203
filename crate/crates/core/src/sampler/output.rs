use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::level::Level;
use crate::error::{Error, Result};
use crate::model::{format_fields, format_real};

pub const SAMPLE_FILE: &str = "sample.txt";
pub const SAMPLE_INFO_FILE: &str = "sample_info.txt";
pub const LEVELS_FILE: &str = "levels.txt";

pub const SAMPLE_INFO_HEADER: &str = "# level_assignment log_likelihood tiebreaker thread";
pub const LEVELS_HEADER: &str = "# log_X log_likelihood tiebreaker accepts tries exceeds visits";

/// The three run files in one directory.
pub(crate) struct OutputFiles {
    dir: PathBuf,
    sample: BufWriter<File>,
    sample_info: BufWriter<File>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

impl OutputFiles {
    pub(crate) fn create(dir: &Path, description: &str) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let sample_path = dir.join(SAMPLE_FILE);
        let info_path = dir.join(SAMPLE_INFO_FILE);
        let mut sample = create(&sample_path)?;
        let mut sample_info = create(&info_path)?;
        writeln!(sample, "# {description}").map_err(|e| Error::io(&sample_path, e))?;
        writeln!(sample_info, "{SAMPLE_INFO_HEADER}").map_err(|e| Error::io(&info_path, e))?;
        sample.flush().map_err(|e| Error::io(&sample_path, e))?;
        sample_info.flush().map_err(|e| Error::io(&info_path, e))?;
        Ok(OutputFiles {
            dir: dir.to_path_buf(),
            sample,
            sample_info,
        })
    }

    pub(crate) fn append_sample(
        &mut self,
        fields: &[f64],
        level: usize,
        log_l: f64,
        tiebreaker: f64,
        thread: usize,
    ) -> Result<()> {
        let sample_path = self.dir.join(SAMPLE_FILE);
        let info_path = self.dir.join(SAMPLE_INFO_FILE);
        writeln!(self.sample, "{}", format_fields(fields))
            .and_then(|_| self.sample.flush())
            .map_err(|e| Error::io(&sample_path, e))?;
        writeln!(
            self.sample_info,
            "{level} {} {} {thread}",
            format_real(log_l),
            format_real(tiebreaker)
        )
        .and_then(|_| self.sample_info.flush())
        .map_err(|e| Error::io(&info_path, e))
    }

    /// Rewrites `levels.txt` through a temporary file and a rename, so readers
    /// never see a partial file.
    pub(crate) fn write_levels(&self, levels: &[Level]) -> Result<()> {
        write_levels(&self.dir, levels)
    }
}

pub(crate) fn write_levels(dir: &Path, levels: &[Level]) -> Result<()> {
    let path = dir.join(LEVELS_FILE);
    let tmp = dir.join(format!("{LEVELS_FILE}.tmp"));
    let mut text = String::with_capacity(64 * (levels.len() + 1));
    text.push_str(LEVELS_HEADER);
    text.push('\n');
    for level in levels {
        let c = &level.counters;
        text.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            format_real(level.log_x),
            format_real(level.threshold.log_l),
            format_real(level.threshold.tiebreaker),
            c.accepts,
            c.tries,
            c.exceeds,
            c.visits
        ));
    }
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
}
