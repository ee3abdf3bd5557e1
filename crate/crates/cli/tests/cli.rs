//! End-to-end tests of the `clocked` binary: output shapes and the exit code
//! contract (0 definite, 2 usage/parse error, 3 inconclusive).

use std::process::{Command, Output};

fn clocked(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clocked"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn reduce_i_i_i() {
    let out = clocked(&["reduce", "I I I"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4, "3 steps + final: {text}");
    assert!(text.lines().last().unwrap().starts_with("final: #^2"), "{text}");
}

#[test]
fn reduce_variable_is_empty_trace() {
    let out = clocked(&["reduce", "x"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "final: x\n");
}

#[test]
fn reduce_atomic_identity_application() {
    let out = clocked(&["reduce", "--mode", "atomic", "(\\x. x) y"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("<>(y)"), "{}", stdout(&out));
}

#[test]
fn tree_omega_is_certified_bottom() {
    let out = clocked(&["tree", "--depth", "2", "Omega"]);
    assert_eq!(out.status.code(), Some(0), "certified bottom is a definite result");
    let text = stdout(&out);
    assert!(text.contains("⊥"), "{text}");
    assert!(!text.contains("⊥?"), "{text}");
}

#[test]
fn tree_depth_zero_is_a_cut() {
    let out = clocked(&["tree", "--depth", "0", "x"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("…"), "{}", stdout(&out));
}

#[test]
fn tree_fuel_starvation_is_inconclusive() {
    let out = clocked(&["tree", "--depth", "1", "--fuel", "1", "Y0 f"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("⊥?"), "{}", stdout(&out));
}

#[test]
fn tree_json_has_approximants_per_depth() {
    let out = clocked(&["tree", "--json", "--depth", "2", "--depth", "3", "bohmY 1 @ f"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let approx = doc["approximants"].as_array().expect("array");
    assert_eq!(approx.len(), 2);
    assert_eq!(approx[0]["depth"], 2);
    assert_eq!(approx[1]["tree"]["kind"], "head");
    assert_eq!(approx[1]["tree"]["ann"], 2);
}

#[test]
fn compare_bohm_sequence_members() {
    let out = clocked(&["compare", "bohmY 2 @ x", "bohmY 3 @ x"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOT beta-convertible"), "{}", stdout(&out));
}

#[test]
fn compare_equal_terms_is_inconclusive() {
    let out = clocked(&["compare", "I", "I"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("inconclusive"), "{}", stdout(&out));
}

#[test]
fn compare_json_agrees_with_text_verdict() {
    let out = clocked(&[
        "compare", "--json", "--mode", "atomic", "yVec 0 @ x", "yVec 1 @ x",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["verdict"], "not-convertible");
    assert!(
        doc["evidenceStandard"].as_str().unwrap().starts_with("bounded-reduct-improvement"),
        "{doc}"
    );
}

#[test]
fn simple_subcommand() {
    let out = clocked(&["simple", "bohmY 2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("simple"), "{}", stdout(&out));

    let out = clocked(&["simple", "(\\x. x x)(I I)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("not simple"), "{}", stdout(&out));

    let out = clocked(&["simple", "Omega"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("simple"), "{}", stdout(&out));
}

#[test]
fn zoo_listing() {
    let out = clocked(&["zoo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["I", "Omega", "S", "delta", "eta", "Y0", "bohmY", "yVec"] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn parse_error_exits_2() {
    let out = clocked(&["reduce", "(\\x."]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn unknown_strategy_exits_2() {
    let out = clocked(&["reduce", "--strategy", "bogus", "I I"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join("clocked-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("term.lam");
    std::fs::write(&path, "-- a comment\n(\\x. x) y\n").unwrap();
    let out = clocked(&["reduce", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("final: # y"), "{}", stdout(&out));
}
