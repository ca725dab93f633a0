use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn algcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algcomm")).args(args).env_remove("ALGCOMM_SEED").output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn det_m_of_ones() {
    let o = algcomm(&["detM", "--l", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("-1"));
    let o = algcomm(&["detM", "--l", "1,2,3", "--format", "json"]);
    assert_eq!(json(&o)["det"], "30");
}

#[test]
fn adversary_fools_depth_one_toy() {
    let o = algcomm(&["adversary", "orthant", &data("toy_depth1.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["outcome"], "fooling");
    assert_eq!(v["point_a"], "+,+");
    assert_eq!(v["point_b"], "+,-");
    assert_eq!(v["flip_vector"], serde_json::json!([0, 1]));
    assert_eq!(v["transcripts_identical"], true);
    assert_eq!(v["memberships"], serde_json::json!([true, false]));
}

#[test]
fn wrong_arity_is_usage_error() {
    let o = algcomm(&["run", &data("toy_depth1.json"), "--input", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expects 2"));
}

#[test]
fn bad_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"field\": \"real\",\n  oops\n}").unwrap();
    let o = algcomm(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn invalid_tree_is_violated_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    let text = r#"{"field":"real","n_x":1,"n_y":1,"root":0,"nodes":[
        {"id":0,"party":"X","message":[[1,1,[1,0]]],"tests":[],"branches":[{"signs":[],"child":0}]}]}"#;
    std::fs::write(&path, text).unwrap();
    assert_eq!(algcomm(&["validate", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn zoo_round_trip_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = algcomm(&["zoo", "emit", "polyhedron-s", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(algcomm(&["validate", p]).status.code(), Some(0));
    let run = json(&algcomm(&["run", p, "--input", "1,-1/2,0,1", "--format", "json"]));
    assert_eq!(run["verdict"], "accept");
    let run = json(&algcomm(&["run", p, "--input", "1,-2,0,1", "--format", "json"]));
    assert_eq!(run["verdict"], "reject");
}

#[test]
fn probabilistic_orthant_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prob.json");
    std::fs::write(&path, algcomm(&["zoo", "emit", "orthant-prob", "--n", "1"]).stdout).unwrap();
    let p = path.to_str().unwrap();
    let member = json(&algcomm(&["prob", p, "--input", "1,2", "--format", "json"]));
    assert_eq!(member["probability"], "1");
    assert_eq!(member["decision"], "accept");
    let outside = json(&algcomm(&["prob", p, "--input", "1,-2", "--format", "json"]));
    assert_eq!(outside["probability"], "1/4");
    assert_eq!(outside["decision"], "reject");
}

#[test]
fn monte_carlo_is_seeded() {
    let toy = data("toy_depth1.json");
    let a = algcomm(&["mc", &toy, "--set", "orthant", "--trials", "300", "--seed", "9", "--format", "json"]);
    let b = algcomm(&["mc", &toy, "--set", "orthant", "--trials", "300", "--seed", "9", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1));
    let env = Command::new(env!("CARGO_BIN_EXE_algcomm"))
        .args(["mc", &toy, "--set", "orthant", "--trials", "300", "--format", "json"])
        .env("ALGCOMM_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn zoo_protocol_agrees_under_mc() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    std::fs::write(&path, algcomm(&["zoo", "emit", "orthant", "--n", "2"]).stdout).unwrap();
    let o = algcomm(&["mc", path.to_str().unwrap(), "--set", "orthant", "--trials", "400", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["agreement_rate"], "1");
}

#[test]
fn certify_rank_of_inner_product() {
    let o = algcomm(&["certify", "rank", "--poly", "X1*Y1 + X2*Y2 + X3*Y3", "--n-x", "3", "--n-y", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lower_bound"], 3);
    assert_eq!(v["rechecked"], true);
}

#[test]
fn divisor_rejects_multiple_of_f() {
    let ok = algcomm(&["certify", "divisor", "--n", "4", "--m", "1", "--h", "X1 + Y3^2"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = algcomm(&["certify", "divisor", "--n", "2", "--m", "1", "--h", "2*(X1*Y1 + X2*Y2)"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn audit_flags_accept_everything() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.json");
    let text = r#"{"field":"real","n_x":1,"n_y":1,"root":0,"nodes":[
        {"id":0,"party":"X","message":[[1,1,[0,0]]],"tests":[],"branches":[{"signs":[],"child":"accept"}]}]}"#;
    std::fs::write(&path, text).unwrap();
    let o = algcomm(&["audit", path.to_str().unwrap(), "--target", "S", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["premise_violations"], serde_json::json!([1]));
}

#[test]
fn knapsack_cap_is_enforced() {
    assert_eq!(algcomm(&["zoo", "emit", "knapsack", "--n", "9"]).status.code(), Some(2));
    assert_eq!(algcomm(&["zoo", "emit", "knapsack", "--n", "2", "--knapsack-cap", "1"]).status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(algcomm(&["frobnicate"]).status.code(), Some(2));
}
