// Drives the installed binary end to end: argument handling, file
// output, and the exit-code contract (0 ok, 1 invariant failure,
// 2 configuration error, 3 non-convergence).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inscribed"))
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = tmp(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const SQUARE: &str = r#"{"type":"polygon","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}"#;

#[test]
fn help_exits_cleanly() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("triangle-table"));
}

#[test]
fn invariant_suite_passes_and_reports() {
    let out = bin().args(["invariants", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("all checks passed"), "report was:\n{text}");
    assert!(text.contains("seed 7"));
}

#[test]
fn malformed_config_is_a_setup_error() {
    let cfg = write_tmp("bad_config.json", r#"{"rel_tol": "tight"}"#);
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "invariants"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn case_sweep_requires_a_case_or_all() {
    let out = bin().arg("case-sweep").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn starved_quadrature_exits_nonconverged() {
    let cfg = write_tmp(
        "starved.json",
        r#"{"angular_points": 16, "rel_tol": 1e-9, "max_depth": 4, "corner_depth": 4}"#,
    );
    let domain = write_tmp("square_domain.json", SQUARE);
    let region = write_tmp(
        "small_triangle.json",
        r#"{"vertices":[[-0.3,-0.2],[0.4,-0.1],[0.0,0.3]]}"#,
    );
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "area"])
        .args(["--domain", domain.to_str().unwrap()])
        .args(["--region", region.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("converged: false"));
}

#[test]
fn distance_prints_a_number() {
    let domain = write_tmp(
        "disk.json",
        r#"{"type":"ellipse","center":[0,0],"shape":[[1,0],[0,1]]}"#,
    );
    let out = bin()
        .args(["distance", "--domain", domain.to_str().unwrap()])
        .args(["--from", "0,0", "--to", "0.5,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: f64 = text
        .strip_prefix("distance ")
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| panic!("unexpected output: {text}"));
    assert!((value - 0.5f64.atanh()).abs() < 1e-12);
}

#[test]
fn degenerate_writes_parseable_csv() {
    let path = tmp("degenerate_smoke.csv");
    let out = bin()
        .args(["degenerate", "--samples", "8", "--x0", "0.125"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("wrote "));

    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().iter().next(), Some("x"));
    let rows: Vec<_> = reader.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert_eq!(row.len(), 12);
        row[3].parse::<f64>().unwrap();
        row[4].parse::<f64>().unwrap();
    }
}
