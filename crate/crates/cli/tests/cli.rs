use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn capregion(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_capregion"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn config(dir: &TempDir, name: &str, json: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

fn mds42(dir: &TempDir) -> String {
    config(dir, "mds.json", r#"{"mu": "1", "code": {"kind": "mds", "n": 4, "k": 2}}"#)
}

fn simplex3(dir: &TempDir) -> String {
    config(dir, "simplex.json", r#"{"mu": "1", "code": {"kind": "simplex", "k": 3}}"#)
}

#[test]
fn region_csv_for_mds_and_repetition() {
    let dir = TempDir::new().unwrap();
    let run = capregion(&["region", "--config", &mds42(&dir)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "0,5/2\n1,2\n2,1\n5/2,0\n");

    let rep = config(&dir, "rep.json", r#"{"mu": "1", "code": {"kind": "replication", "n": 4, "copies": [2, 2]}}"#);
    let run = capregion(&["region", "--config", &rep, "--format", "csv"]);
    assert_eq!(run.stdout, "0,2\n2,2\n2,0\n");
}

#[test]
fn region_csv_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let hybrid = config(&dir, "h.json", r#"{"mu": "3/2", "code": {"kind": "hybrid", "a": 1, "b": 2, "c": 3}}"#);
    let first = capregion(&["region", "--config", &hybrid]).stdout;
    assert_eq!(first, capregion(&["region", "--config", &hybrid]).stdout);
    assert!(first.starts_with("0,"));
}

#[test]
fn region_support_table_for_three_files() {
    let dir = TempDir::new().unwrap();
    let run = capregion(&["region", "--config", &simplex3(&dir), "--seed", "5"]);
    assert_eq!(run.code, 0);
    let mut lines = run.stdout.lines();
    assert_eq!(lines.next(), Some("w1,w2,w3,max"));
    assert_eq!(lines.next(), Some("1,0,0,4"));
    assert!(run.stdout.contains("1,1,1,4\n"));
    let svg = capregion(&["region", "--config", &simplex3(&dir), "--format", "svg"]);
    assert_eq!(svg.code, 3);
}

#[test]
fn malformed_configs_name_the_field() {
    let dir = TempDir::new().unwrap();
    let extra = config(&dir, "x.json", r#"{"mu": "1", "code": {"kind": "mds", "n": 4, "k": 2, "parity": 1}}"#);
    let run = capregion(&["region", "--config", &extra]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("parity"), "{}", run.stderr);

    let missing = config(&dir, "m.json", r#"{"code": {"kind": "simplex", "k": 3}}"#);
    let run = capregion(&["region", "--config", &missing]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("mu"), "{}", run.stderr);

    let bad_mu = config(&dir, "b.json", r#"{"mu": "0.5", "code": {"kind": "simplex", "k": 3}}"#);
    let run = capregion(&["member", "--config", &bad_mu, "--demand", "0,0,0"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("mu"), "{}", run.stderr);

    let unrecoverable = config(&dir, "u.json", r#"{"mu": "1", "code": {"kind": "replication", "n": 3, "copies": [0, 3]}}"#);
    assert_eq!(capregion(&["region", "--config", &unrecoverable]).code, 3);
}

#[test]
fn member_exit_codes() {
    let dir = TempDir::new().unwrap();
    let simplex = simplex3(&dir);
    let run = capregion(&["member", "--config", &simplex, "--demand", "4/3,4/3,4/3"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("file,recovering_set,share\n"));

    let run = capregion(&["member", "--config", &simplex, "--demand", "0,0,0"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "file,recovering_set,share\n");

    let run = capregion(&["member", "--config", &simplex, "--demand", "5,0,0"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("outside region"));

    assert_eq!(capregion(&["member", "--config", &simplex, "--demand", "1,1"]).code, 3);
    assert_eq!(capregion(&["member", "--config", &simplex, "--demand", "1,a,1"]).code, 3);
}

#[test]
fn waterfill_outputs() {
    let dir = TempDir::new().unwrap();
    let mds = mds42(&dir);
    let run = capregion(&["waterfill", "--config", &mds, "--demand", "3/2,3/2"]);
    assert_eq!(run.code, 0);
    let loads = run.stdout.split("node,load\n").nth(1).unwrap();
    assert_eq!(loads, "f1,1\nf2,1\np1,1\np2,1\n");

    let run = capregion(&["waterfill", "--config", &mds, "--demand", "1/2,1/3"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("file,recovering_set,share\n1,f1,1/2\n2,f2,1/3\n\nnode,load\n"));

    let run = capregion(&["waterfill", "--config", &mds, "--demand", "2,2"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("unserved residual 1"), "{}", run.stderr);

    assert_eq!(capregion(&["waterfill", "--config", &simplex3(&dir), "--demand", "1,1,1"]).code, 3);
}

#[test]
fn compare_reports() {
    let run = capregion(&["compare", "mds", "4", "2"]);
    assert_eq!(run.code, 0);
    let report: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(report["max_abs_gap"], "0");
    assert_eq!(report["instance"], "mds 4 2");

    let run = capregion(&["compare", "hybrid", "2", "1", "1"]);
    assert_eq!(run.code, 2);
    let report: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    let at = report["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["point"][0] == "3/2")
        .unwrap();
    assert_eq!((&at["lp"], &at["closed_form"], &at["gap"]), (&"3/2".into(), &"7/4".into(), &"1/4".into()));
    assert_eq!(report["max_abs_gap"], "1/2");
    assert!(run.stderr.contains("discrepancy"));

    assert_eq!(capregion(&["compare", "simplex", "3"]).code, 0);
    assert_eq!(capregion(&["compare", "mds", "5", "3"]).code, 3);
    assert_eq!(capregion(&["compare", "lrc", "4"]).code, 3);
}

#[test]
fn compare_is_reproducible_and_accepts_configs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let out = out.to_str().unwrap();
    let simplex = simplex3(&dir);
    assert_eq!(capregion(&["compare", "--config", &simplex, "--seed", "9", "--out", out]).code, 0);
    let first = std::fs::read_to_string(out).unwrap();
    capregion(&["compare", "--config", &simplex, "--seed", "9", "--out", out]);
    assert_eq!(first, std::fs::read_to_string(out).unwrap());
    assert!(first.contains("\"seed\": 9"));
}

#[test]
fn plot_writes_svg_with_exact_metadata() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("region.svg");
    let hybrid = config(&dir, "h.json", r#"{"mu": "1", "code": {"kind": "hybrid", "a": 2, "b": 1, "c": 1}}"#);
    let run = capregion(&["plot", "--config", &hybrid, "--out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains(r#"data-vertices="0,2 1,2 3,0""#));
    assert!(svg.contains(r#"data-vertices="0,2 1,2 2,3/2 5/2,1 3,0""#));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(capregion(&["bogus"]).code, 3);
    assert_eq!(capregion(&["region"]).code, 3);
    assert_eq!(capregion(&["region", "--config", "/nonexistent/cfg.json"]).code, 3);
    assert_eq!(capregion(&["--help"]).code, 0);
}
