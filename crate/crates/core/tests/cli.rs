//! End-to-end runs of the `dnest` command line.

use std::path::Path;
use std::process::Command;

fn dnest(dir: &Path, args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dnest"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const SMALL_OPTIONS: &str = "\
# a short run
5\t# particles per thread
1000\t# new level interval
200\t# save interval
100\t# thread steps
10\t# max levels
10\t# lambda
100\t# beta
300\t# max saves
";

fn data_rows(path: &Path) -> usize {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count()
}

#[test]
fn run_postprocess_and_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("OPTIONS"), SMALL_OPTIONS).unwrap();

    let (ok, stdout, stderr) = dnest(dir, &["run", "gaussian", "-s", "3", "--dim", "2", "--width", "0.3"]);
    assert!(ok, "{stderr}");
    assert!(stdout.contains("# Seeding random number generators with 3."));
    assert!(stdout.contains("# Creating level 9 "));
    assert_eq!(data_rows(&dir.join("sample.txt")), 300);
    assert_eq!(data_rows(&dir.join("sample_info.txt")), 300);
    assert_eq!(data_rows(&dir.join("levels.txt")), 10);

    let (ok, stdout, stderr) = dnest(dir, &["postprocess", "-s", "1"]);
    assert!(ok, "{stderr}");
    let lines: Vec<&str> = stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 3, "{stdout}");
    assert!(lines[0].starts_with("log(Z) = "));
    assert!(lines[1].starts_with("Information = ") && lines[1].ends_with(" nats."));
    assert!(lines[2].starts_with("Effective sample size = "));
    let log_z: f64 = lines[0]["log(Z) = ".len()..].parse().unwrap();
    let exact = dnest::models::analytic_gaussian_log_z(2, 0.3);
    assert!((log_z - exact).abs() < 0.5, "{log_z} vs {exact}");
    assert!(dir.join("posterior_sample.txt").exists());

    let (ok, _, stderr) = dnest(dir, &["diagnostics"]);
    assert!(ok, "{stderr}");
    let csv_rows = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap().lines().count() - 1;
    assert_eq!(csv_rows("trace.csv"), 300);
    assert_eq!(csv_rows("levels_diag.csv"), 9);
    assert_eq!(csv_rows("weights.csv"), 300);
}

#[test]
fn abc_run_and_threshold() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("OPTIONS"), SMALL_OPTIONS).unwrap();
    let data = dnest::models::data_dir().join("abc_normal.txt");
    let (ok, _, stderr) = dnest(dir, &["run", "abc", "-s", "4", "-d", data.to_str().unwrap()]);
    assert!(ok, "{stderr}");
    let (ok, stdout, stderr) = dnest(dir, &["postprocess-abc", "-s", "1", "--threshold-fraction", "0.5"]);
    assert!(ok, "{stderr}");
    // level floor(0.5 * 9) = 4
    assert!(stdout.contains("Threshold level = 4"), "{stdout}");
    assert!(stdout.contains("Epsilon = "));
}

#[test]
fn usage_errors_fail_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let (ok, _, stderr) = dnest(dir, &["run", "nonsense"]);
    assert!(!ok);
    assert!(stderr.contains("nonsense"));

    std::fs::write(dir.join("OPTIONS"), "5\n1000\n").unwrap();
    let (ok, _, stderr) = dnest(dir, &["run", "gaussian"]);
    assert!(!ok);
    assert!(stderr.contains("expected 8 option values"), "{stderr}");

    let (ok, _, stderr) = dnest(dir, &["postprocess"]);
    assert!(!ok);
    assert!(stderr.starts_with("dnest: "), "{stderr}");
}
