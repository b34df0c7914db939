use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn minsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn triangle(dir: &Path) -> (String, String) {
    let g = write(
        dir,
        "g.txt",
        "# triangle\n0 1 1.0\n\n1 2 2.0\n2 0 0.5  # last\n",
    );
    let b = write(dir, "b.txt", "0 1\n2 -1\n");
    (g.display().to_string(), b.display().to_string())
}

#[test]
fn solve_succeeds_on_valid_input() {
    let dir = TempDir::new().unwrap();
    let (g, b) = triangle(dir.path());
    let out = minsum(&["solve", "voltage", &g, &b, "--iters", "4"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("voltage problem, 3 vertices"));
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let (g, b) = triangle(dir.path());
    let first = dir.path().join("a.csv").display().to_string();
    let second = dir.path().join("b.csv").display().to_string();
    for path in [&first, &second] {
        let out = minsum(&[
            "solve", "flow", &g, &b, "--iters", "6", "--format", "csv", "--out", path,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());
    assert!(String::from_utf8(a).unwrap().starts_with("t,"));
}

#[test]
fn unbalanced_injection_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let (g, _) = triangle(dir.path());
    let b = write(dir.path(), "bad.txt", "0 1\n");
    let out = minsum(&["solve", "voltage", &g, &b.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_graph_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.txt", "0 1 x\n");
    let b = write(dir.path(), "b.txt", "");
    let out = minsum(&[
        "solve",
        "flow",
        &g.display().to_string(),
        &b.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = minsum(&["solve", "flow", "/nonexistent/g.txt", "/nonexistent/b.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn voltage_on_graph_with_leaves_is_rejected() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.txt", "0 1 1\n1 2 1\n2 0 1\n2 3 1\n");
    let b = write(dir.path(), "b.txt", "0 1\n3 -1\n");
    let (g, b) = (g.display().to_string(), b.display().to_string());
    assert_eq!(minsum(&["solve", "voltage", &g, &b]).status.code(), Some(2));
    assert_eq!(minsum(&["solve", "flow", &g, &b]).status.code(), Some(0));
}

#[test]
fn verify_passing_suite_exits_zero() {
    let out = minsum(&["verify", "--suite", "walks", "--max-vertices", "8"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let out = minsum(&["verify", "--suite", "regular-characterization"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn tv_decay_writes_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("d.csv").display().to_string();
    let svg = dir.path().join("d.svg").display().to_string();
    let args = [
        "experiment",
        "tv-decay",
        "--family",
        "torus",
        "-n",
        "6",
        "--t-max",
        "5",
        "--csv",
        &csv,
        "--svg",
        &svg,
    ];
    let out = minsum(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("t,delta_inf_norm\n"));
    assert_eq!(table.lines().count(), 6);
    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.trim_end().ends_with("</svg>"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), {
        minsum(&args);
        std::fs::read_to_string(&csv).unwrap()
    });
}

#[test]
fn tv_decay_rejects_odd_degree() {
    let out = minsum(&[
        "experiment",
        "tv-decay",
        "--family",
        "torus",
        "-d",
        "3",
        "-n",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generated_graph_round_trips_through_solve() {
    let dir = TempDir::new().unwrap();
    let out = minsum(&["generate", "petersen"]);
    assert_eq!(out.status.code(), Some(0));
    let g = write(dir.path(), "p.txt", &String::from_utf8(out.stdout).unwrap());
    let b = write(dir.path(), "b.txt", "0 2\n5 -2\n");
    let out = minsum(&[
        "solve",
        "flow",
        &g.display().to_string(),
        &b.display().to_string(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["n_vertices"], 10);
}
