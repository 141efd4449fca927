use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use taxispan::io::{parse_tight_span_json, tight_span_json, to_text};

const EXAMPLE_1: &str =
    r#"{"points":[[-5,-3],[-5,1],[-3,4],[-2,-1],[1,2],[2,-2],[4,-3],[5,-5],[7,-4]]}"#;

fn taxispan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taxispan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tightspan_writes_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.json", EXAMPLE_1);
    let (out, svg) = (dir.path().join("out.json"), dir.path().join("out.svg"));
    let res = taxispan(&["tightspan", "--in", arg(&input), "--out", arg(&out), "--svg", arg(&svg)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let span = parse_tight_span_json(&text).unwrap();
    assert!(!span.is_tree);
    assert_eq!(span.roots.len(), 7);
    assert_eq!(to_text(&tight_span_json(&span)), text);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let again = taxispan(&["tightspan", "--in", arg(&input)]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn every_command_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.json", EXAMPLE_1);
    for cmd in ["trim", "centers", "cylinder", "tightspan", "validate", "render"] {
        let res = taxispan(&[cmd, "--in", arg(&input)]);
        assert_eq!(res.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&res.stderr));
        assert!(!res.stdout.is_empty());
    }
    let res = taxispan(&["render", "--in", arg(&input), "--no-grid", "--scale", "10"]);
    let svg = String::from_utf8(res.stdout).unwrap();
    assert!(!svg.contains(r#"class="grid""#));
}

#[test]
fn validate_reports_and_checks_step() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.json", EXAMPLE_1);
    let res = taxispan(&["validate", "--in", arg(&input), "--step", "1/4"]);
    assert_eq!(res.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["step"], "1/4");
    for bad in ["0", "-1", "3", "abc"] {
        let res = taxispan(&["validate", "--in", arg(&input), "--step", bad]);
        assert_eq!(res.status.code(), Some(1), "step {bad}");
    }
}

#[test]
fn matrix_and_csv_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let fig2 = write(
        dir.path(),
        "fig2.json",
        r#"{"matrix":[[0,4,5,3],[4,0,3,5],[5,3,0,4],[3,5,4,0]],"labels":["x","y","z","t"]}"#,
    );
    let res = taxispan(&["trim", "--in", arg(&fig2)]);
    assert_eq!(res.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["sizes"], serde_json::json!([4, 4]));
    assert_eq!(doc["layers"][0]["pendant"], serde_json::json!([1, 1, 1, 1]));

    let res = taxispan(&["cylinder", "--in", arg(&fig2), "--depth", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["quotient"]["edges"].as_array().unwrap().len(), 4);
    assert_eq!(taxispan(&["cylinder", "--in", arg(&fig2), "--depth", "5"]).status.code(), Some(1));
    assert_eq!(taxispan(&["tightspan", "--in", arg(&fig2)]).status.code(), Some(1));

    let csv = write(dir.path(), "line.csv", "x,y\n1,0\n2,0\n3,0\n4,0\n5,0\n");
    let res = taxispan(&["tightspan", "--in", arg(&csv)]);
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["is_tree"], true);
    assert_eq!(doc["roots"], serde_json::json!([[3, 0]]));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(dir.path(), "dup.json", r#"{"points":[[0,0],[1,1],[0,0]]}"#);
    let res = taxispan(&["centers", "--in", arg(&dup)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("duplicate"));
    assert_eq!(taxispan(&["centers", "--in", arg(&dup), "--dedupe"]).status.code(), Some(0));

    let bad = write(dir.path(), "bad.json", "{\"points\": [[0, 0],\n  [1, \"one\"]]}");
    let res = taxispan(&["centers", "--in", arg(&bad)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("at 2:"));

    let not_metric = write(dir.path(), "nm.json", r#"{"matrix":[[0,1,5],[1,0,1],[5,1,0]]}"#);
    assert_eq!(taxispan(&["trim", "--in", arg(&not_metric)]).status.code(), Some(1));
    assert_eq!(taxispan(&["trim", "--in", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(taxispan(&["frobnicate", "--in", arg(&dup)]).status.code(), Some(1));
    assert_eq!(taxispan(&["trim"]).status.code(), Some(1));
    let empty = write(dir.path(), "empty.json", "{}");
    assert_eq!(taxispan(&["trim", "--in", arg(&empty)]).status.code(), Some(1));
    assert_eq!(taxispan(&["--help"]).status.code(), Some(0));
}

#[test]
fn rational_coordinates_survive() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "q.json", r#"{"points":[["1/2","-3/4"],[2.5,1],[0,"1/4"]]}"#);
    let res = taxispan(&["tightspan", "--in", arg(&input)]);
    assert_eq!(res.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["tips"][0], serde_json::json!([0, "1/4"]));
    assert_eq!(doc["roots"], serde_json::json!([["1/2", "1/4"]]));
}
