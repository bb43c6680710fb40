use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transchrome"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

fn golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let expected = std::fs::read_to_string(fixtures().join(name)).expect("fixture exists");
    assert_eq!(stdout(&out), expected, "{name}");
}

#[test]
fn golden_outputs() {
    golden("homs_p2_h1_k2.json", &["--json", "homs", "--p", "2", "--h", "1", "--k", "2"]);
    golden("decompose_p2_n2_t1_k2.json", &["--json", "decompose", "--p", "2", "--n", "2", "--t", "1", "--k", "2"]);
    golden("count_sub_h1_p5_m3.json", &["--json", "count-sub", "--h", "1", "--p", "5", "--m", "3"]);
    golden(
        "transfer_p2_h1_k2_transposition.json",
        &["--json", "transfer", "--p", "2", "--h", "1", "--k", "2", "--class", "(0 1)"],
    );
    golden("fgl_multiplicative_p2_k2.json", &["--json", "fgl", "--p", "2", "--k", "2", "--law", "multiplicative"]);
    golden(
        "induce_klein_identity.json",
        &["--json", "induce", "--p", "2", "--h", "1", "--k", "2", "--input", "klein_identity.json"],
    );
}

#[test]
fn homs_lists_four_classes() {
    let v = json(&["homs", "--p", "2", "--h", "1", "--k", "2", "--json"]);
    let orders: Vec<u64> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["centralizer_order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![24, 4, 8, 4]);
}

#[test]
fn decompose_reports_degree_seven() {
    let v = json(&["--json", "decompose", "--p", "2", "--n", "2", "--t", "1", "--k", "2"]);
    assert_eq!(v["degree"], 7);
    let nontrivial = v["components"].as_array().unwrap().iter().filter(|c| c["ideal_trivial"] == false).count();
    assert_eq!(nontrivial, 3);
    assert_eq!(v["triangle"]["holds"], true);
}

#[test]
fn json_round_trips() {
    let out = run(&["--json", "decompose", "--p", "3", "--n", "2", "--t", "1", "--k", "1"]);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn transfer_accepts_class_ids() {
    let v = json(&["--json", "transfer", "--p", "2", "--h", "1", "--k", "2", "--class", "p2.k2.h1:[(ann{0,1,2,3}:idx4,m1)]"]);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
    assert_eq!(v["ideal_trivial"], false);
    let v = json(&["--json", "transfer", "--p", "2", "--h", "2", "--k", "2", "--class", "(0 1);(2 3)"]);
    assert_eq!(v["ideal_trivial"], true);
}

#[test]
fn fgl_height_two() {
    let v = json(&["--json", "fgl", "--p", "2", "--n", "2"]);
    assert_eq!(v["torsion_rank"], 4);
    assert_eq!(v["D"], 17);
    assert_eq!(v["honda_reduction"], true);
    assert_eq!(v["axioms"], true);
}

#[test]
fn table_output() {
    let out = run(&["count-sub", "--h", "2", "--p", "3", "--m", "1"]);
    assert_eq!(stdout(&out), "4 (brute force 4)\n");
    let out = run(&["decompose", "--p", "2", "--n", "2", "--t", "1", "--k", "1"]);
    assert!(stdout(&out).contains("triangle: holds"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["homs", "--p", "2"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["homs", "--p", "4", "--h", "1", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--p", "2", "--n", "2", "--t", "2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--p", "2", "--n", "5", "--t", "1", "--k", "1"]).status.code(), Some(3));
    assert_eq!(run(&["count-sub", "--h", "40", "--p", "97", "--m", "40"]).status.code(), Some(3));
    assert_eq!(run(&["--max-elements", "10", "transfer", "--p", "2", "--h", "1", "--k", "2", "--class", "()"]).status.code(), Some(3));
    assert_eq!(run(&["transfer", "--p", "2", "--h", "1", "--k", "2", "--class", "p2.k2.h1:[bogus]"]).status.code(), Some(2));
    assert_eq!(run(&["induce", "--p", "2", "--h", "1", "--k", "2", "--input", "missing.json"]).status.code(), Some(1));
}

#[test]
fn reproduce_passes() {
    let out = run(&["reproduce"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11);
}
