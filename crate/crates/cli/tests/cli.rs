use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voa-tensor")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    (code(&out), serde_json::from_slice(&out.stdout).expect("json report"))
}

fn results(doc: &Value) -> &Vec<Value> {
    doc["results"].as_array().unwrap()
}

fn result<'a>(doc: &'a Value, id: &str) -> &'a Value {
    results(doc).iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("no result {id}"))
}

#[test]
fn delta_suite_reports_twelve_identities() {
    let (c, doc) = json(&["check", "--suite", "delta", "--window", "5"]);
    assert_eq!(c, 0);
    assert_eq!(doc["schemaVersion"], 1);
    let rs = results(&doc);
    assert_eq!(rs.len(), 12);
    for r in rs {
        assert_eq!(r["pass"], true, "{r}");
        assert!(r["window"].as_str().unwrap().contains(":[-5,"), "{r}");
        assert!(r["witnesses"].as_array().unwrap().is_empty());
        assert!(!r["anchor"].as_str().unwrap().is_empty());
    }
    let ids: Vec<&str> = rs.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn full_heisenberg_suite_exits_zero() {
    let out = run(&["check", "--suite", "all", "--instance", "heisenberg", "--cutoff", "4"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS P-JACOBI-ON-COMPAT"));
    assert!(text.contains("PRECONDITION-UNMET Q-JACOBI-ON-COMPAT"));
    assert!(!text.contains("COMMALG-JACOBI-ALWAYS"));
    assert!(text.ends_with("32 results, 0 failed\n"));
}

#[test]
fn commalg_jacobi_with_random_lambda() {
    let (c, doc) = json(&["check", "--property", "COMMALG-JACOBI-ALWAYS", "--instance", "a2", "--lambda", "random:seed=7"]);
    assert_eq!(c, 0);
    assert_eq!(results(&doc).len(), 1);
    assert_eq!(result(&doc, "COMMALG-JACOBI-ALWAYS")["pass"], true);
    assert_eq!(doc["config"]["lambda"], "random:seed=7");
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["check", "--property", "COMMALG-JACOBI-ALWAYS"],
        vec!["check", "--property", "NO-SUCH-ID", "--instance", "a2"],
        vec!["check", "--suite", "delta", "--window", "0"],
        vec!["check", "--suite", "some"],
        vec!["check", "--instance", "a2"],
        vec!["check", "--suite", "delta", "--cutoff", "-1"],
        vec!["check", "--suite", "delta", "--format", "yaml"],
        vec!["fuse", "regular", "nowhere", "--instance", "a2"],
        vec!["compat", "--instance", "a2", "--lambda", "random:seed=x"],
    ] {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
}

#[test]
fn fuse_a2_regular_regular() {
    let out = run(&["fuse", "regular", "regular", "--instance", "a2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("dim 2, oracle 2, isomorphic: yes").count(), 2);
}

#[test]
fn fuse_qxq_e1_e2_is_zero() {
    let (c, doc) = json(&["fuse", "e1", "e2", "--instance", "qxq"]);
    assert_eq!(c, 0);
    for id in ["FUSE-P", "FUSE-Q"] {
        let r = result(&doc, id);
        assert_eq!(r["dimTensor"], 0);
        assert_eq!(r["dimCompatible"], 0);
        assert_eq!(r["oracleDim"], 0);
        assert_eq!(r["isomorphic"], true);
    }
}

#[test]
fn fuse_on_heisenberg_is_unsupported() {
    let out = run(&["fuse", "F0", "F0", "--instance", "heisenberg"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported instance"));
}

#[test]
fn fuse_golden_report() {
    let out = run(&["fuse", "regular", "quotient", "--instance", "a2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let golden = include_str!("golden/fuse_a2_regular_quotient.json");
    assert_eq!(stdout(&out), golden);
    let doc: Value = serde_json::from_str(golden).unwrap();
    for id in ["FUSE-P", "FUSE-Q"] {
        // A₂ ⊗_{A₂} A₂/(s) is one-dimensional with s acting by zero
        let r = result(&doc, id);
        assert_eq!(r["dimTensor"], 1);
        assert_eq!(r["oracleDim"], 1);
        assert_eq!(r["action"]["s"], serde_json::json!([["0"]]));
        assert_eq!(r["action"]["1"], serde_json::json!([["1"]]));
    }
}

#[test]
fn canonical_lambda_on_fock_space() {
    let (c, doc) = json(&["compat", "--instance", "heisenberg", "--cutoff", "3", "--lambda", "canonical:w'=1"]);
    assert_eq!(c, 0);
    assert_eq!(doc["config"]["flavor"], "P");
    assert_eq!(result(&doc, "P-COMPAT")["pass"], true);
    assert_eq!(result(&doc, "P-JACOBI-ON-COMPAT")["pass"], true);
    assert_eq!(result(&doc, "P-GRADING")["status"], "preconditionUnmet");
}

#[test]
fn canonical_lambda_fails_q_compatibility() {
    let (c, doc) = json(&["compat", "--instance", "heisenberg", "--cutoff", "3", "--lambda", "canonical:w'=1", "--flavor", "Q"]);
    assert_eq!(c, 1);
    assert_eq!(result(&doc, "Q-COMPAT")["pass"], false);
}

#[test]
fn unbalanced_lambda_witness() {
    let (c, doc) = json(&["compat", "--instance", "a2", "--lambda", "random:seed=3"]);
    assert_eq!(c, 1);
    for id in ["P-COMPAT", "Q-COMPAT"] {
        let r = result(&doc, id);
        assert_eq!(r["pass"], false);
        let at = r["witnesses"][0]["at"].as_str().unwrap();
        assert!(at.contains("v=s w1=1 w2=1"), "{at}");
    }
    let values = result(&doc, "P-COMPAT")["lambda"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
}

#[test]
fn zero_lambda_has_empty_closure() {
    let (c, doc) = json(&["compat", "--instance", "a2", "--lambda", "zero"]);
    assert_eq!(c, 0);
    for id in ["P-GRADING", "Q-GRADING"] {
        assert_eq!(result(&doc, id)["closureDim"], 0);
    }
}

#[test]
fn lambda_file_round_trip() {
    let (_, doc) = json(&["compat", "--instance", "a2", "--lambda", "random:seed=3"]);
    let file = std::env::temp_dir().join(format!("voa-tensor-lambda-{}.json", std::process::id()));
    std::fs::write(&file, result(&doc, "P-COMPAT")["lambda"].to_string()).unwrap();
    let (c, replay) = json(&["compat", "--instance", "a2", "--lambda", file.to_str().unwrap()]);
    std::fs::remove_file(&file).unwrap();
    assert_eq!(c, 1);
    for id in ["P-COMPAT", "Q-COMPAT"] {
        assert_eq!(result(&doc, id)["witnesses"], result(&replay, id)["witnesses"]);
    }
}

#[test]
fn malformed_lambda_file_exits_two() {
    let file = std::env::temp_dir().join(format!("voa-tensor-bad-{}.json", std::process::id()));
    std::fs::write(&file, "{\"values\": [{\"w1\": \"1\"}]}").unwrap();
    let out = run(&["compat", "--instance", "a2", "--lambda", file.to_str().unwrap()]);
    std::fs::remove_file(&file).unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn same_seed_gives_identical_json() {
    let args = ["check", "--suite", "all", "--instance", "a2", "--seed", "11", "--window", "2", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["config"]["lambda"], "balanced:seed=11");
}

#[test]
fn out_flag_writes_the_report() {
    let file = std::env::temp_dir().join(format!("voa-tensor-out-{}.json", std::process::id()));
    let out = run(&["fuse", "regular", "regular", "--instance", "z2", "--format", "json", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    std::fs::remove_file(&file).unwrap();
    assert_eq!(result(&doc, "FUSE-P")["dimTensor"], 2);
}
