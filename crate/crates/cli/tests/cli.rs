// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzycyl"))
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (code, json)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const TOPOLOGY: &str = r#"{"ground_set":["a","b"],"opens":[
 {"name":"0","values":{"a":"0","b":"0"}},
 {"name":"1","values":{"a":"1","b":"1"}},
 {"name":"A","values":{"a":"2/3","b":"1/4"}},
 {"name":"B","values":{"a":"1/3","b":"3/4"}}]}"#;

fn topology(dir: &TempDir) -> PathBuf {
    // close the family under min and max of A and B
    let text = TOPOLOGY.replace(
        "]}",
        r#",{"name":"A∧B","values":{"a":"1/3","b":"1/4"}},{"name":"A∨B","values":{"a":"2/3","b":"3/4"}}]}"#,
    );
    write(dir, "topology.json", &text)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn counterexample_verbatim() {
    let (code, v) = run(&["counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(v["psi"], "X × [0,1/3)");
    assert_eq!(v["complement_of_psi"], "X × [1/3,1)");
    assert_eq!(v["psi_of_complement"], "X × [0,2/3)");
    assert_eq!(v["verdict"], "unequal");
    let (_, v) = run(&["counterexample", "--ground", "p,q,r"]);
    assert_eq!(v["psi"], "X × [0,1/3)");
}

#[test]
fn validate_reports_missing_whole() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"ground_set":["a"],"opens":[{"name":"0","values":{"a":"0"}},{"name":"h","values":{"a":"1/2"}}]}"#,
    );
    let (code, v) = run(&["validate", "--topology", s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
    assert_eq!(v["witness"]["kind"], "missing_whole");
    let (code, v) = run(&["validate", "--topology", s(&topology(&dir))]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "junk.json", "{ not json");
    assert_eq!(run(&["validate", "--topology", s(&junk)]).0, 2);
    let range = write(
        &dir,
        "range.json",
        r#"{"ground_set":["a"],"opens":[{"name":"x","values":{"a":"3/2"}}]}"#,
    );
    assert_eq!(run(&["validate", "--topology", s(&range)]).0, 2);
    assert_eq!(run(&["paths", "--grid-step", "1/4"]).0, 2);
    assert_eq!(run(&["paths", "--grid-step", "2/9"]).0, 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["cylinder", "--topology", s(&missing)]).0, 2);
}

#[test]
fn cylinder_dump() {
    let dir = TempDir::new().unwrap();
    let (code, v) = run(&["cylinder", "--topology", s(&topology(&dir))]);
    assert_eq!(code, 0);
    let a = &v["psi_star"]["A"]["fibers"]["a"][0];
    assert_eq!(a["lo"], "0");
    assert_eq!(a["hi"], "2/3");
    assert_eq!(a["hi_open"], true);
    assert_eq!(v["psi_star"]["0"]["fibers"]["b"], Value::Array(vec![]));
}

#[test]
fn retraction_certificate_round_trip() {
    let dir = TempDir::new().unwrap();
    let topo = topology(&dir);
    let cert = dir.path().join("cert.json");
    let (code, v) = run(&[
        "verify-retraction",
        "--topology",
        s(&topo),
        "--t",
        "1/2",
        "--x",
        "a",
        "--alpha",
        "1/4",
        "--target",
        r#"{"type":"tstar","open":"A","gamma":"1/8"}"#,
        "--out",
        s(&cert),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdict"], "valid");
    assert_eq!(v["certificate"]["case"], "interior");
    let (code, v) = run(&["verify-retraction", "--topology", s(&topo), "--certificate", s(&cert)]);
    assert_eq!(code, 0);
    assert_eq!(v["matches_regenerated"], true);

    // widen the time interval to all of [0,1]; the box image now escapes
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["t_interval"] = serde_json::json!({"lo":"0","hi":"1","lo_open":false,"hi_open":false});
    doc["target"] = serde_json::json!({"type":"tstar","open":"A","gamma":"1/3"});
    doc["region_expr"] = serde_json::json!({"clauses":[[{"type":"pi2","gamma":"-1"}]]});
    doc["region"] = serde_json::json!({"fibers":{"a":[{"lo":"0","hi":"1","lo_open":false,"hi_open":true}],"b":[{"lo":"0","hi":"1","lo_open":false,"hi_open":true}]}});
    let bad = write(&dir, "bad.json", &doc.to_string());
    let (code, v) = run(&["verify-retraction", "--topology", s(&topo), "--certificate", s(&bad)]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["verdict"]["image_escapes"]["element"], "a", "{v}");
}

#[test]
fn decide_complement() {
    let dir = TempDir::new().unwrap();
    let t = write(
        &dir,
        "fg.json",
        r#"{"ground_set":["a","b"],"opens":[
         {"name":"F","values":{"a":"1/3","b":"1"}},
         {"name":"G","values":{"a":"2/3","b":"0"}},
         {"name":"H","values":{"a":"2/3","b":"1/8"}}]}"#,
    );
    let (code, v) = run(&["decide-complement", "--topology", s(&t), "--f", "F", "--g", "G"]);
    assert_eq!(code, 0);
    assert_eq!(v["is_complement"], true);
    let (code, v) = run(&["decide-complement", "--topology", s(&t), "--f", "F", "--g", "H"]);
    assert_eq!(code, 0);
    assert_eq!(v["is_complement"], false);
    assert_eq!(
        run(&["decide-complement", "--topology", s(&t), "--f", "F", "--g", "Q"]).0,
        2
    );
}

#[test]
fn oracle_and_connectivity() {
    let dir = TempDir::new().unwrap();
    let topo = topology(&dir);
    let (code, v) = run(&["oracle", "--topology", s(&topo)]);
    assert_eq!(code, 0);
    assert_eq!(v["mismatches"], Value::Array(vec![]));
    assert!(v["compared"].as_u64().unwrap() > 6);
    let (code, v) = run(&["connectivity", "--topology", s(&topo), "--levels", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate_holds"], true);
    assert_eq!(v["slice_agrees"], true);
}

#[test]
fn sweeps_are_deterministic() {
    let a = run(&["paths", "--sweeps", "4", "--seed", "7", "--grid-step", "1/8"]);
    let b = run(&[
        "paths",
        "--sweeps",
        "4",
        "--seed",
        "7",
        "--grid-step",
        "1/8",
        "--sequential",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

#[test]
fn laws_small() {
    let dir = TempDir::new().unwrap();
    let (code, v) = run(&[
        "laws",
        "--sweeps",
        "3",
        "--seed",
        "7",
        "--grid-step",
        "1/8",
        "--topology",
        s(&topology(&dir)),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passed"], true);
    assert_eq!(v["topology"]["passed"], true);
}
