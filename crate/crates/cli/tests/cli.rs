use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cartier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn census_writes_table_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = cartier(&[
        "census",
        "--p",
        "3",
        "--k",
        "1",
        "--g",
        "3",
        "--epsilon",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    let cubefree = &v["tables"][0];
    assert_eq!(cubefree["squarefree"], false);
    assert_eq!(cubefree["probabilities"]["0"], "2/3");
    assert_eq!(cubefree["total"], "1944");
    assert_eq!(v["passed"], true);
}

#[test]
fn genus_zero_census_is_a_single_row() {
    let o = cartier(&[
        "census",
        "--p",
        "3",
        "--k",
        "1",
        "--g",
        "0",
        "--epsilon",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,g,epsilon,squarefree,a,count,total,probability");
    assert_eq!(lines[1], "3,0,2,false,0,9,9,1/1");
    assert_eq!(lines[2], "3,0,2,true,0,6,6,1/1");
    assert_eq!(lines.len(), 3);
}

#[test]
fn census_refuses_other_characteristics() {
    let o = cartier(&["census", "--p", "2", "--k", "1", "--g", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("characteristic-3 required for curve census"));
}

#[test]
fn census_reports_violated_comparisons() {
    let o = cartier(&["census", "--g", "1", "--epsilon", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bad: Vec<&Value> = v["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "violated")
        .collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["measured"], "1/3");
}

#[test]
fn budget_refusal_exits_two() {
    let o = cartier(&["census", "--g", "6", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cartier(&["heights", "--p", "2", "--grid", "m<=6", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_flags_are_rejected() {
    assert_eq!(
        cartier(&["census", "--g", "2", "--epsilon", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(cartier(&["census", "--g", "two"]).status.code(), Some(1));
    assert_eq!(cartier(&["census", "--p", "4", "--g", "1"]).status.code(), Some(1));
    assert_eq!(cartier(&["heights", "--p", "2"]).status.code(), Some(1));
    assert_eq!(cartier(&["verify", "--workers", "0"]).status.code(), Some(1));
    assert_eq!(
        cartier(&["moduli", "--g", "1", "--format", "csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn heights_grid_matches() {
    let o = cartier(&["heights", "--p", "2", "--k", "1", "--grid", "m<=3,l<=1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cells = v["cells"].as_array().unwrap();
    let s31 = cells.iter().find(|c| c["name"] == "S(3,1)").unwrap();
    assert_eq!(s31["measured"], "2016");
    assert!(cells.iter().all(|c| c["matches"] != false));
    assert_eq!(v["passed"], true);
}

#[test]
fn heights_lines() {
    let o = cartier(&["heights", "--p", "5", "--k", "1", "--lines", "--n", "3", "--kmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cells"][1]["measured"], "3720");
}

#[test]
fn heights_rejected_regimes_are_not_failures() {
    let o = cartier(&["heights", "--grid", "m<=2,l<=1", "--include-t"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rejected = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "regime rejected")
        .count();
    assert!(rejected > 0);
}

#[test]
fn moduli_and_nu_pass() {
    let o = cartier(&["moduli", "--g", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"]["1"]["formula"], v["entries"]["1"]["direct"]);
    let o = cartier(&["nu", "--p", "3", "--jmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for w in ["1", "3", "8"] {
        let out = dir.path().join(format!("w{w}.json"));
        let o = cartier(&["census", "--g", "0-3", "--workers", w, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        files.push(std::fs::read(&out).unwrap());
        let out = dir.path().join(format!("h{w}.csv"));
        cartier(&[
            "heights",
            "--p",
            "3",
            "--grid",
            "m<=3,l<=1",
            "--include-t",
            "--workers",
            w,
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ]);
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[2]);
    assert_eq!(files[0], files[4]);
    assert_eq!(files[1], files[3]);
    assert_eq!(files[1], files[5]);
}

#[test]
fn quick_verify_prints_matrix_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = cartier(&["verify", "--quick", "--json", out.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion ")).count(), 12);
    let v = read_json(&out);
    assert_eq!(v["quick"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 12);
    // The quick grid includes the g = 1 cell whose stated exact value is wrong.
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(v["passed"], false);
}
