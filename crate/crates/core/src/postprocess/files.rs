//! Reading the run files, possibly while the sampler is still writing them.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::LikelihoodValue;
use crate::sampler::{Level, LevelCounters, LEVELS_FILE, SAMPLE_FILE, SAMPLE_INFO_FILE};

/// One row of `sample_info.txt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleInfo {
    pub level: usize,
    pub log_l: f64,
    pub tiebreaker: f64,
    pub thread: usize,
}

impl SampleInfo {
    pub fn likelihood(&self) -> LikelihoodValue {
        LikelihoodValue::new(self.log_l, self.tiebreaker)
    }
}

/// The contents of a run directory. `samples` and `info` always have the
/// same length.
#[derive(Debug, Clone)]
pub struct RunFiles {
    pub dir: PathBuf,
    /// The `# ...` header of `sample.txt`, without the marker.
    pub description: Option<String>,
    pub samples: Vec<Vec<f64>>,
    pub info: Vec<SampleInfo>,
    pub levels: Vec<Level>,
}

impl RunFiles {
    /// Reads all three files from `dir`. A final line without its newline is
    /// treated as not yet written, and if one of the sample files is ahead of
    /// the other the extra rows are ignored.
    pub fn read(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let (description, mut samples) = read_rows(&dir.join(SAMPLE_FILE), None)?;
        let (_, info_rows) = read_rows(&dir.join(SAMPLE_INFO_FILE), Some(4))?;
        let (_, level_rows) = read_rows(&dir.join(LEVELS_FILE), Some(7))?;

        let mut info: Vec<SampleInfo> = info_rows
            .iter()
            .map(|r| SampleInfo {
                level: r[0] as usize,
                log_l: r[1],
                tiebreaker: r[2],
                thread: r[3] as usize,
            })
            .collect();
        let n = samples.len().min(info.len());
        samples.truncate(n);
        info.truncate(n);

        let levels = level_rows
            .iter()
            .map(|r| Level {
                log_x: r[0],
                threshold: LikelihoodValue::new(r[1], r[2]),
                counters: LevelCounters {
                    accepts: r[3] as u64,
                    tries: r[4] as u64,
                    exceeds: r[5] as u64,
                    visits: r[6] as u64,
                },
            })
            .collect::<Vec<_>>();
        if levels.is_empty() {
            return Err(Error::Parse {
                path: dir.join(LEVELS_FILE),
                line: 1,
                message: "no levels".into(),
            });
        }
        Ok(RunFiles {
            dir: dir.to_path_buf(),
            description,
            samples,
            info,
            levels,
        })
    }

    pub fn num_samples(&self) -> usize {
        self.info.len()
    }
}

/// Parses whitespace-delimited numeric rows. Returns the text of the first
/// comment line along with the rows.
pub(crate) fn read_rows(path: &Path, columns: Option<usize>) -> Result<(Option<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rows(&text, path, columns)
}

pub(crate) fn parse_rows(
    text: &str,
    path: &Path,
    columns: Option<usize>,
) -> Result<(Option<String>, Vec<Vec<f64>>)> {
    // drop a partially written last line
    let complete = match text.rfind('\n') {
        Some(i) if i + 1 < text.len() => &text[..=i],
        Some(_) => text,
        None => "",
    };
    let mut description = None;
    let mut rows = Vec::new();
    let mut width = columns;
    for (i, line) in complete.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if description.is_none() && rows.is_empty() {
                description = Some(comment.trim().to_string());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let parse_error = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let row = line
            .split_whitespace()
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_error(e.to_string()))?;
        match width {
            Some(w) if w != row.len() => {
                return Err(parse_error(format!("expected {w} columns, found {}", row.len())))
            }
            None => width = Some(row.len()),
            _ => {}
        }
        rows.push(row);
    }
    Ok((description, rows))
}
