use std::process::{Command, Output};

use serde_json::Value;

fn burnside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json", "-"];
    full.extend_from_slice(args);
    let o = burnside(&full);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).expect("stdout is JSON"))
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(burnside(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(burnside(&["basis", "C6"]).status.code(), Some(2));
    assert_eq!(burnside(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(burnside(&["product", "C2", "0", "99"]).status.code(), Some(2));
}

#[test]
fn deflation_numbers_on_klein_four() {
    let o = burnside(&["deflation-number", "C2xC2", "all", "x"]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<String> = stdout(&o).lines().map(|l| l.rsplit(" = ").next().unwrap().to_string()).collect();
    assert_eq!(values, ["-1/2", "0", "1/2", "0"]);
}

#[test]
fn same_seed_gives_identical_json() {
    let run = || burnside(&["--seed", "17", "--json", "-", "verify", "properties", "--instances", "200"]).stdout;
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
}

#[test]
fn csv_has_one_row_per_record() {
    let (_, v) = json(&["verify", "phi1"]);
    let n = v["records"].as_array().unwrap().len();
    let o = burnside(&["--csv", "-", "verify", "phi1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), n + 1);
}

#[test]
fn worked_example_discrepancy_does_not_fail() {
    let (code, v) = json(&["verify", "appendix-c", "--case", "C8"]);
    assert_eq!(code, 0);
    let factors = v["records"].as_array().unwrap().iter().find(|r| r["name"] == "appendix-c/C8/factors").unwrap();
    assert_eq!(factors["status"], "paper-discrepancy");
    assert_eq!(burnside(&["verify", "appendix-c", "--case", "C6"]).status.code(), Some(2));
}

#[test]
fn nonzero_kernels_for_two_groups() {
    let o = burnside(&["verify", "theorem1", "--p", "2", "--max-order", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let list = out.lines().find(|l| l.contains("nonzero-list/")).unwrap();
    assert!(list.starts_with("pass"));
    let (_, v) = json(&["verify", "theorem1", "--p", "2", "--max-order", "16"]);
    let rec = v["records"].as_array().unwrap().iter().find(|r| r["name"] == "nonzero-list/p2-max16").unwrap();
    let mut got: Vec<&str> = rec["computed"].as_str().unwrap().split(", ").collect();
    got.sort_unstable();
    assert_eq!(got, ["C16", "C2", "C2xC2", "C4", "C4xC2", "C8", "C8xC2"]);
}

#[test]
fn decomposition_of_c9xc3() {
    let (code, v) = json(&["kernel", "decompose", "C9xC3"]);
    assert_eq!(code, 0);
    let cs = v["constituents"].as_array().unwrap();
    assert_eq!(cs.len(), 4);
    assert!(cs.iter().all(|c| c["degree"] == "3" && c["multiplicity"] == "1"));
}

#[test]
fn restriction_closed_formula_agrees() {
    let (code, v) = json(&["op", "res", "--group", "C4xC2", "--datum", "x", "--basis", "idempotent"]);
    assert_eq!(code, 0);
    assert_eq!(v["closed_formula_agrees"], true);
}

#[test]
fn kernel_subspace_dimensions() {
    let (_, v) = json(&["spaces", "C3xC3"]);
    assert_eq!(v["sp"], 13);
    assert_eq!(v["restriction_kernel"], 5);
}
