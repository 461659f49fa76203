// Regenerates the synthetic datasets bundled in `data/`.
//
// ```text
// cargo run --example make_datasets -- crates/core/data
// ```

use std::path::{Path, PathBuf};

use dnest::data::Dataset;
use dnest::model::format_fields;
use dnest::models::{AbcNormal, StraightLine};

pub const STRAIGHT_LINE_SEED: u64 = 2016;
pub const ABC_SEED: u64 = 2017;

fn write_with_header(data: &Dataset, header: &str, path: &Path) -> dnest::Result<()> {
    let mut text = format!("# {header}\n");
    for r in 0..data.num_rows() {
        let row: Vec<f64> = (0..data.num_columns()).map(|c| data.column(c)[r]).collect();
        text.push_str(&format_fields(&row));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| dnest::Error::io(path, e))
}

pub fn write_datasets(dir: &Path) -> dnest::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| dnest::Error::io(dir, e))?;
    let line = dir.join("straight_line.txt");
    write_with_header(
        &StraightLine::synthetic_dataset(STRAIGHT_LINE_SEED),
        "x y; y = 2x - 3 + N(0, 1.5^2) noise",
        &line,
    )?;
    let abc = dir.join("abc_normal.txt");
    write_with_header(
        &AbcNormal::simulate_dataset(100, 0.0, 1.0, ABC_SEED),
        "100 draws from N(0, 1)",
        &abc,
    )?;
    Ok(vec![line, abc])
}

pub fn run_example() -> dnest::Result<()> {
    let dir = std::env::temp_dir().join("dnest-example-datasets");
    for path in write_datasets(&dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> dnest::Result<()> {
    match std::env::args_os().nth(1) {
        Some(dir) => {
            for path in write_datasets(Path::new(&dir))? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        None => run_example(),
    }
}
