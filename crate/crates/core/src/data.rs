//! Datasets loaded once and shared read-only by every particle.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Whitespace-delimited numeric columns. Blank lines and `#` comments are
/// skipped; every row must have the same number of columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| c.len() != first.len()) {
                return Err(Error::InvalidArgument("columns of unequal length".into()));
            }
        }
        Ok(Dataset { columns })
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let row = content
                .split_whitespace()
                .map(|tok| tok.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })?;
            if columns.is_empty() {
                columns = vec![Vec::new(); row.len()];
            } else if row.len() != columns.len() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!("expected {} columns, found {}", columns.len(), row.len()),
                });
            }
            for (col, x) in columns.iter_mut().zip(row) {
                col.push(x);
            }
        }
        Ok(Dataset { columns })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn num_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for r in 0..self.num_rows() {
            let row: Vec<f64> = self.columns.iter().map(|c| c[r]).collect();
            out.push_str(&crate::model::format_fields(&row));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Process-wide cache of loaded datasets, keyed by path. Loading the same
/// file twice returns the same shared instance.
pub fn load_shared(path: impl AsRef<Path>) -> Result<Arc<Dataset>> {
    static REGISTRY: OnceLock<Mutex<HashMap<PathBuf, Arc<Dataset>>>> = OnceLock::new();
    let path = path.as_ref();
    let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    let registry = REGISTRY.get_or_init(Default::default);
    if let Some(ds) = registry.lock().unwrap().get(&key) {
        return Ok(Arc::clone(ds));
    }
    let ds = Arc::new(Dataset::load(path)?);
    registry
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&ds));
    Ok(ds)
}
