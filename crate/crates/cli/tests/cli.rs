use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const SAMPLE9: &str = "9\n0 1 2 7 6 1 6 3 3\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_level-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_tree(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/analysis-report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid_report(v: &Value) {
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}");
    // internal consistency
    let rho = v["rho"].as_f64().unwrap();
    let energy = v["energy"].as_f64().unwrap();
    assert!((energy - 2.0 * rho).abs() <= 1e-8 * rho.max(1.0));
    let zero_cluster = v["spectrum"]["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["value"].as_f64().unwrap().abs() < 1e-6)
        .map_or(0, |c| c["multiplicity"].as_u64().unwrap());
    assert_eq!(zero_cluster, v["mul_zero_exact"].as_u64().unwrap());
}

#[test]
fn sample9_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let o = run(&["analyze", p.to_str().unwrap(), "--format", "json", "--charpoly"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid_report(&v);
    assert!((v["rho"].as_f64().unwrap() - 10.415812724).abs() < 1e-9);
    let coeffs: Vec<&str> = v["charpoly"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "0", "-80", "-276", "-216", "0", "0", "0", "0", "0"]);
    assert_eq!(v["LI"], 44);
    assert_eq!(v["H"], 160);
    assert_eq!(v["mul_zero_exact"], 5);
    assert!(v["bounds"].as_array().unwrap().iter().all(|b| b["satisfied"] == true));
}

#[test]
fn text_and_csv_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let o = run(&["analyze", p.to_str().unwrap(), "--charpoly"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("level index LI:  44"));
    assert!(text.contains("x^9 - 80x^7 - 276x^6 - 216x^5"));
    assert!(text.contains("rho:             10.415812724"));

    let o = run(&["analyze", p.to_str().unwrap(), "--format", "csv", "--bounds", "firstb,q-lower"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,lhs,relation,rhs,slack,satisfied");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("firstb-lower,10.415812724,>=,9.77777777778,"));

    let o = run(&["analyze", p.to_str().unwrap(), "--format", "matrix"]);
    let matrix = stdout(&o);
    let mut rows = matrix.lines();
    assert_eq!(rows.next(), Some("9"));
    assert_eq!(rows.next().unwrap().split_whitespace().collect::<Vec<_>>(), ["0", "1", "2", "3", "2", "1", "2", "3", "3"]);
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let o = run(&["analyze", p.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("v1 [label=\"v1\", shape=doublecircle, root=true];"));
    assert_eq!(dot.matches("->").count(), 8);
    assert!(dot.contains("v7 -> v4;"));
}

#[test]
fn treefile_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let o = run(&["analyze", p.to_str().unwrap(), "--format", "treefile"]);
    assert_eq!(stdout(&o), SAMPLE9);
    let q = write_tree(dir.path(), "again.tree", &stdout(&o));
    let a: Value = serde_json::from_str(&stdout(&run(&["analyze", p.to_str().unwrap(), "--format", "json"]))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&run(&["analyze", q.to_str().unwrap(), "--format", "json"]))).unwrap();
    assert_eq!(a["canonical"], b["canonical"]);
    assert_eq!(a["canonical"], "0,1,2,3,3,1,2,3,2");
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = bin()
        .args(["analyze", "-", "--format", "json", "--bounds", "none"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"3\n0 1 1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid_report(&v);
    assert!((v["rho"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "bad.tree", "3\n0 1 x\n");
    let o = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2, column 5"), "{}", stderr(&o));

    let p = write_tree(dir.path(), "cycle.tree", "3\n0 3 2\n");
    let o = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cycle"), "{}", stderr(&o));

    let p = write_tree(dir.path(), "roots.tree", "3\n0 0 1\n");
    assert_eq!(code(&run(&["analyze", p.to_str().unwrap()])), 2);
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.tree");
    assert_eq!(code(&run(&["analyze", missing.to_str().unwrap()])), 3);
    let out = dir.path().join("no/such/dir/ledger.txt");
    let o = run(&["verify", "--order", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn usage_errors_exit_sixty_four() {
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["extremal", "--order", "7", "--stat", "unknown", "--max"])), 64);
    assert_eq!(code(&run(&["extremal", "--order", "7", "--stat", "rho"])), 64);
    assert_eq!(code(&run(&["verify", "--order", "5", "--only", "bogus"])), 64);
    assert_eq!(code(&run(&["verify", "--order", "0"])), 64);
    assert_eq!(code(&run(&["--tol", "-1", "verify", "--order", "3"])), 64);
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    assert_eq!(code(&run(&["analyze", p.to_str().unwrap(), "--bounds", "bogus"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn verify_order_eight() {
    let o = run(&["verify", "--order", "8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("order 8: 115 trees (expected 115)"));
    assert!(text.contains("PASS: 0 violation(s)"));
}

#[test]
fn verify_selection_json() {
    let o = run(&["verify", "--order", "10", "--only", "energy-identity", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tree_count"], 719);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "energy-identity");
    assert_eq!(checks[0]["trees_checked"], 719);
    assert_eq!(checks[0]["violations"], 0);
}

#[test]
fn verify_output_is_deterministic() {
    let a = run(&["verify", "--order", "7", "--format", "json", "--jobs", "1"]);
    let b = run(&["verify", "--order", "7", "--format", "json", "--jobs", "3"]);
    let c = run(&["verify", "--order", "7", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn verify_writes_ledger_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ledger.json");
    let o = run(&["verify", "--order", "6", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("20 trees"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["expected_tree_count"], 20);
}

#[test]
fn resource_limits_exit_four() {
    assert_eq!(code(&run(&["verify", "--order", "30"])), 4);
    let o = bin()
        .args(["verify", "--order", "6"])
        .env("LEVEL_SPECTRA_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    let dir = tempfile::tempdir().unwrap();
    let parents: Vec<String> = (0..30).map(|i| i.to_string()).collect();
    let p = write_tree(dir.path(), "path30.tree", &format!("30\n{}\n", parents.join(" ")));
    assert_eq!(code(&run(&["charpoly", p.to_str().unwrap()])), 4);
    assert_eq!(code(&run(&["analyze", p.to_str().unwrap()])), 0);
}

#[test]
fn extremal_examples() {
    let o = run(&["extremal", "--order", "7", "--stat", "rho", "--min", "--expect", "star", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 6f64.sqrt()).abs() < 1e-10);
    assert_eq!(v["tree"], "0,1,1,1,1,1,1");
    assert_eq!(v["matched"], true);

    let o = run(&["extremal", "--order", "7", "--stat", "energy", "--max", "--expect", "path"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("expect path: PASS"));

    let o = run(&["extremal", "--order", "7", "--stat", "rho", "--max", "--expect", "star"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("expect star: FAIL"));
}

#[test]
fn special_families() {
    let o = run(&["special", "path", "--order", "20", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid_report(&v["report"]);
    assert!(v["closed_form"]["residual"].as_f64().unwrap() < 1e-8);

    let o = run(&["special", "leafstar", "--order", "6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["closed_form"]["cubic"], "x^3 + (-21)x + (-16)");
    assert_eq!(v["closed_form"]["residual_zeros"], 3);
    for r in v["closed_form"]["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-8);
    }

    let o = run(&["special", "dary", "--arity", "2", "--height", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid_report(&v["report"]);
    assert_eq!(v["report"]["n"], 15);
    assert_eq!(v["report"]["l_max"], 3);

    let o = run(&["special", "star", "--order", "10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rho:             3\n"));

    assert_eq!(code(&run(&["special", "dary", "--arity", "2"])), 64);
    assert_eq!(code(&run(&["special", "leafstar", "--order", "2"])), 64);
}

#[test]
fn charpoly_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let o = run(&["charpoly", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "x^9 - 80x^7 - 276x^6 - 216x^5\n");
    let o = run(&["charpoly", p.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"][3], "-276");
}

#[test]
fn jacobi_method_matches() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_tree(dir.path(), "fig1.tree", SAMPLE9);
    let a: Value = serde_json::from_str(&stdout(&run(&["analyze", p.to_str().unwrap(), "--format", "json"]))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&run(&["--method", "jacobi", "analyze", p.to_str().unwrap(), "--format", "json"]))).unwrap();
    assert!((a["rho"].as_f64().unwrap() - b["rho"].as_f64().unwrap()).abs() < 1e-9);
}
