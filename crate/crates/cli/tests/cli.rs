use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn topo(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_topo"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = topo(&["validate", "--space", "S2"], None);
    assert_eq!(ok.status.code(), Some(0));
    let v = json_of(&ok);
    assert_eq!(v["valid"], true);
    assert_eq!(v["opens"], 3);
    assert_eq!(v["prime"], true);

    let not_top = topo(&["validate"], Some(r#"{"points":["a","b"],"opens":[[],["a"],["b"]]}"#));
    assert_eq!(not_top.status.code(), Some(1));
    assert_eq!(json_of(&not_top)["valid"], false);

    let garbage = topo(&["validate"], Some("{\"points\": ["));
    assert_eq!(garbage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&garbage.stderr).contains("parse error"));
}

#[test]
fn preorder_input() {
    let out = topo(
        &["validate", "--compact"],
        Some(r#"{"points":["x","y","z"],"preorder":[["x","y"],["y","z"]]}"#),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["opens"], 4);
}

#[test]
fn usage_errors() {
    assert_eq!(topo(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(topo(&["search", "-e", "kappa", "--exhaustive", "2"], None).status.code(), Some(2));
    assert_eq!(topo(&["search", "-e", "regular"], None).status.code(), Some(2));
    assert_eq!(topo(&["collection", "--space", "NOPE"], None).status.code(), Some(2));
}

#[test]
fn files_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("space.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, "\"D3\"").unwrap();
    let out = topo(
        &[
            "collection",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["collections"]["kappa"]["size"], v["collections"]["sigma"]["size"]);
    assert_eq!(v["classification"]["consonant"], true);
}

#[test]
fn collection_properties() {
    let doc = r#"{"space":"S2","families":[[["a"]]]}"#;
    let out = topo(&["collection", "--compact"], Some(doc));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["hereditary"], true);
    assert_eq!(v["self_joinable"], true);
    assert_eq!(v["self_splittable"], false);
    assert_eq!(v["witnesses"]["self_splittable"]["u1"], serde_json::json!([]));
}

#[test]
fn analyze_reports_failures() {
    let out = topo(&["analyze", "--space", "S2", "--compact"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    let failed: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["gamma-self-splittable"]);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["ms"] == 0));
}

#[test]
fn analyze_threads_agree() {
    let one = topo(&["analyze", "--exhaustive", "2", "--threads", "1", "--compact"], None);
    let four = topo(&["analyze", "--exhaustive", "2", "--threads", "4", "--compact"], None);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(json_of(&one).as_array().unwrap().len(), 5);
}

#[test]
fn hyper_compare() {
    let out = topo(&["hyper", "--space", "D3", "--compare", "k", "--compact"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["comparison"]["result"], "equal");
    assert_eq!(v["function_space_homeomorphic"], true);
    assert_eq!(v["meet_jointly_continuous"], true);
    assert_eq!(v["carrier"].as_array().unwrap().len(), 8);
}

#[test]
fn measure_checks() {
    let mu = r#"{"space":"D3","weights":{"a":1,"b":2,"c":"1/2"}}"#;
    let join = topo(&["measure", "verify-join", "-u", "a,b", "-r", "1", "--compact"], Some(mu));
    assert_eq!(join.status.code(), Some(0));
    assert_eq!(json_of(&join)["midpoint"], "2");

    let split = topo(
        &["measure", "verify-split", "--u1", "a", "--u2", "b", "-r", "1", "--compact"],
        Some(mu),
    );
    assert_eq!(split.status.code(), Some(0));
    let v = json_of(&split);
    assert_eq!((v["d"].as_str(), v["m1"].as_str(), v["m2"].as_str()), (Some("1"), Some("1/2"), Some("3/2")));

    let bad = topo(&["measure", "verify-split", "--u1", "a", "--u2", "b", "-r", "5"], Some(mu));
    assert_eq!(bad.status.code(), Some(2));

    let gamma = topo(&["measure", "gamma", "--compact"], Some(mu));
    assert_eq!(gamma.status.code(), Some(1));
    let v = json_of(&gamma);
    assert_eq!(v["hereditarily_self_joinable"], true);
    assert_eq!(v["self_splittable"], false);
    assert_eq!(v["with_full_family_self_splittable"], true);
}

#[test]
fn search_exit_codes() {
    let none = topo(&["search", "-e", "kappa != lambda", "--exhaustive", "3", "--compact"], None);
    assert_eq!(none.status.code(), Some(0));
    let v = json_of(&none);
    assert_eq!(v["instances"], 34);
    assert_eq!(v["counterexamples"], serde_json::json!([]));

    let some = topo(&["search", "-e", "!regular", "--random", "3", "--seed", "5", "--count", "4"], None);
    assert_eq!(some.status.code(), Some(1));
}

#[test]
fn dot_exports() {
    let lattice = topo(&["export-dot", "--space", "D3"], None);
    let text = String::from_utf8(lattice.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 12);

    let inc = topo(&["export-dot", "--space", "S2", "--kind", "inclusion"], None);
    let text = String::from_utf8(inc.stdout).unwrap();
    assert_eq!(text.matches("->").count(), 5);
}
