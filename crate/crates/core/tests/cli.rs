//! End-to-end tests of the command-line interface and its exit codes.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn sandflower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sandflower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tempfile_with(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn chain_reports_group() {
    let out = sandflower(&["chain", "--ks", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tau = 3"), "{text}");
    assert!(text.contains("Z_3"), "{text}");
}

#[test]
fn chain_edge_table_flags_non_generator() {
    let out = sandflower(&["chain", "--ks", "4,4,4,4", "--edges"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tau = 209"), "{text}");
    let e2_row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("e2"))
        .expect("e2 row present")
        .split_whitespace()
        .collect();
    assert_eq!(e2_row, vec!["e2", "11", "19", "no"]);
}

#[test]
fn chain_verify_reports_ok() {
    let out = sandflower(&["chain", "--ks", "5,2,6", "--verify"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("oracle: OK"));
}

#[test]
fn chain_rejects_bad_side_count() {
    let out = sandflower(&["chain", "--ks", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_from_spec_file() {
    let spec = tempfile_with(r#"{"ks": []}"#);
    let out = sandflower(&["chain", "--spec", spec.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tau = 1"), "{text}");
    assert!(text.contains("Z_1"), "{text}");
}

#[test]
fn chain_json_is_parseable() {
    let out = sandflower(&["chain", "--ks", "4,4,4,4", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tau"], "209");
    assert_eq!(v["group"]["display"], "Z_209");
    assert_eq!(v["kind"], "chain");
}

#[test]
fn flower_full_report() {
    let spec = tempfile_with(r#"{"center": 3, "petals": [{"ks":[3]},{"ks":[3]},{"ks":[3]}]}"#);
    let out = sandflower(&[
        "flower",
        "--spec",
        spec.path().to_str().unwrap(),
        "--mu",
        "--generators",
        "--partition",
        "--verify",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tau = 54"), "{text}");
    assert!(text.contains("Z_3 \u{2295} Z_18"), "{text}");
    assert!(text.contains("mu=2"), "{text}");
    assert!(text.contains("cyclic=no"), "{text}");
    assert!(text.contains("oracle: OK"), "{text}");
}

#[test]
fn flower_thick_cycle_spec() {
    // Multiplicities (2,3,4) as digon stacks: Z_26, cyclic.
    let spec =
        tempfile_with(r#"{"center": 3, "petals": [{"ks":[2]},{"ks":[2,2]},{"ks":[2,2,2]}]}"#);
    let out = sandflower(&[
        "flower",
        "--spec",
        spec.path().to_str().unwrap(),
        "--verify",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tau = 26"), "{text}");
    assert!(text.contains("Z_26"), "{text}");
    assert!(text.contains("mu=1"), "{text}");
    assert!(text.contains("cyclic=yes"), "{text}");
}

#[test]
fn flower_generating_edge_absent() {
    let spec =
        tempfile_with(r#"{"center": 4, "petals": [{"ks":[2]},{"ks":[2]},{"ks":[3]},{"ks":[3]}]}"#);
    let out = sandflower(&[
        "flower",
        "--spec",
        spec.path().to_str().unwrap(),
        "--generators",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("generating edge exists: no"));
}

#[test]
fn flower_explicit_partition() {
    let spec = tempfile_with(
        r#"{"center": 4, "petals": [{"ks":[2]},{"ks":[2]},{"ks":[3]},{"ks":[3]}]}"#,
    );
    let path = spec.path().to_str().unwrap().to_owned();
    let out = sandflower(&["flower", "--spec", &path, "--use-partition", "1,3;2,4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("alphas: 6 6"), "{text}");
    assert!(text.contains("betas:  7 7"), "{text}");

    // Entries 1 and 2 share a factor, so {1,2} u {3,4} is not prime.
    let out = sandflower(&["flower", "--spec", &path, "--use-partition", "1,2;3,4"]);
    assert_eq!(out.status.code(), Some(4));

    let out = sandflower(&["flower", "--spec", &path, "--use-partition", "1,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flower_rejects_chain_spec() {
    let spec = tempfile_with(r#"{"ks": [3, 3]}"#);
    let out = sandflower(&["flower", "--spec", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flower_json_schema() {
    let spec = tempfile_with(r#"{"center": 2, "petals": [{"ks":[3]},{"ks":[3]}]}"#);
    let out = sandflower(&["flower", "--spec", spec.path().to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tau"], "12");
    assert_eq!(v["mu"], 1);
    assert_eq!(v["cyclic"], true);
}

#[test]
fn snf_diagonal() {
    let m = tempfile_with("2 2\n2 0\n0 3\n");
    let out = sandflower(&["snf", "--matrix", m.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 6");

    // Reduced Laplacian of a triangle.
    let m = tempfile_with("2 2\n2 -1\n-1 2\n");
    let out = sandflower(&["snf", "--matrix", m.path().to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "1 3");

    // Relation matrix of the 3-petal triangle flower.
    let m = tempfile_with("3 3\n3 -3 0\n0 3 -3\n2 2 2\n");
    let out = sandflower(&["snf", "--matrix", m.path().to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "1 3 18");
}

#[test]
fn snf_rejects_malformed_matrix() {
    let m = tempfile_with("2 2\n1 2 3\n");
    let out = sandflower(&["snf", "--matrix", m.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = sandflower(&["snf", "--matrix", "/nonexistent/matrix.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_small_runs_clean() {
    let out = sandflower(&[
        "sweep",
        "--max-t",
        "2",
        "--max-polys",
        "1",
        "--max-k",
        "4",
        "--jobs",
        "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("instances OK"));
}

#[test]
fn unknown_flag_exits_2() {
    let out = sandflower(&["chain", "--sides", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
