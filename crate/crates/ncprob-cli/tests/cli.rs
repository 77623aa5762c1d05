use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ncprob");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BERNOULLI: &str = r#"{"truncation": 6, "coeffs": ["1", "0", "1", "0", "1", "0", "1"]}"#;

#[test]
fn free_convolution_of_bernoulli_files() {
    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "b.json", BERNOULLI);
    let out_path = dir.path().join("out.json");
    let out = run(&["convolve", "--kind", "free", "--degree", "4", &b, &b, "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    let m = &v["components"]["phi"]["coeffs"];
    assert_eq!(m[2], "2");
    assert_eq!(m[4], "6");
    assert_eq!(v["routes_agree"], true);
}

#[test]
fn boolean_convolution_from_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "b.json", BERNOULLI);
    let out = run_stdin(&["convolve", "--kind", "boolean", "--degree", "4", "-", &b], BERNOULLI);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["components"]["phi"]["coeffs"][2], "2");
    assert_eq!(v["routes_agree"], true);
}

#[test]
fn two_state_kinds_take_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let pair = format!("[{BERNOULLI}, {BERNOULLI}]");
    let p = write(dir.path(), "p.json", &pair);
    let out = run(&["convolve", "--kind", "o-free", "--degree", "6", &p, &p, &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["components"]["psi"].is_object() && v["components"]["theta"].is_object());
    // mismatched arity is an input error
    let b = write(dir.path(), "b.json", BERNOULLI);
    assert_eq!(run(&["convolve", "--kind", "cfree", "--degree", "2", &b, &b]).status.code(), Some(2));
}

#[test]
fn multiplicative_free_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"truncation": 4, "coeffs": ["1", "1/2", "1/3", "-1", "2"]}"#);
    let b = write(dir.path(), "b.json", r#"{"truncation": 4, "coeffs": ["1", "2", "0", "1/4", "1"]}"#);
    let out = run(&["convolve", "--kind", "free", "--op", "multiplicative", "--degree", "4", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["routes_agree"], true);
    let out = run(&["convolve", "--kind", "boolean", "--op", "multiplicative", "--route", "transform", "--degree", "4", &a, &b]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degree_beyond_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "b.json", BERNOULLI);
    let out = run(&["convolve", "--kind", "free", "--degree", "8", &b, &b]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["status"], "error");
}

#[test]
fn lnc_count() {
    let out = run(&["partitions", "--class", "LNC", "--n", "3", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "13\n");
}

#[test]
fn partition_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"n": 4, "blocks": [[1, 4], [2, 3]], "order": [2, 1]}"#);
    let out = run(&["partitions", "--input", &p, "--classify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["blocks"], serde_json::json!([[1, 4], [2, 3]]));
    assert_eq!(v[0]["order"], serde_json::json!([2, 1]));
    // V₁ = {2,3} sits inside the later block V₂ = {1,4}
    assert_eq!(v[0]["classification"]["S2"], serde_json::json!([1]));
    assert_eq!(v[0]["classification"]["outer"], serde_json::json!([2]));
    let ascii = run(&["partitions", "--input", &p, "--ascii"]);
    assert!(String::from_utf8(ascii.stdout).unwrap().contains("V2"));
}

#[test]
fn enumerated_classes_have_expected_sizes() {
    // Catalan, 2^(n-1) and (n+1)!/2
    for (class, n) in [("NC", 14), ("I", 8), ("M", 60)] {
        let out = run(&["partitions", "--class", class, "--n", "4"]);
        assert_eq!(json(&out).as_array().unwrap().len(), n, "{class}");
    }
}

#[test]
fn clt_report_has_vanishing_higher_cumulants() {
    let out = run(&["clt", "--alpha2", "1", "--beta2", "1", "--gamma2", "1", "--degree", "8", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["higher_cumulants_vanish"], true);
    assert_eq!(v["second_cumulants_match"], true);
    for kind in ["I", "OF", "AOF"] {
        let ks = v["cumulants"][kind].as_array().unwrap();
        assert_eq!(ks.len(), 8);
        for (i, k) in ks.iter().enumerate() {
            assert_eq!(k, if i == 1 { "1" } else { "0" });
        }
    }
}

#[test]
fn clt_csv_has_exact_columns() {
    let out = run(&["clt", "--alpha2", "3/2", "--beta2", "1/2", "--gamma2", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,component,k,moment,kesten_moment,abs_err,moment_exact,kesten_moment_exact,abs_err_exact"
    );
    // 3 steps × 3 components × degrees 1..6
    assert_eq!(lines.count(), 54);
}

#[test]
fn cumulant_routes_and_inverse() {
    let dir = tempfile::tempdir().unwrap();
    let t = write(
        dir.path(),
        "t.json",
        r#"{"lambda": {"truncation": 4, "coeffs": ["1", "1", "2", "4", "9"]},
            "mu": {"truncation": 4, "coeffs": ["1", "0", "1", "0", "2"]},
            "nu": {"truncation": 4, "coeffs": ["1", "1/2", "1", "0", "3"]}}"#,
    );
    let out = run(&["cumulants", &t, "--route", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(c["routes_agree"], true);
    assert_eq!(c["OF"]["values"]["x x"], "1");
    let cpath = write(dir.path(), "c.json", &String::from_utf8(out.stdout).unwrap());
    let back = json(&run(&["cumulants", &cpath, "--inverse"]));
    assert_eq!(back["phi"]["values"]["x x x x"], "9");
    assert_eq!(back["theta"]["values"]["x"], "1/2");
}

#[test]
fn specialized_free_cumulants_of_semicircle() {
    let out = run_stdin(
        &["cumulants", "-", "--kind", "free"],
        r#"{"truncation": 6, "coeffs": ["1", "0", "1", "0", "2", "0", "5"]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let vals = &v["values"];
    assert_eq!(vals["x x"], "1");
    for w in ["x", "x x x", "x x x x", "x x x x x", "x x x x x x"] {
        assert_eq!(vals[w], "0", "{w}");
    }
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--seed", "11", "--trials", "3", "--degree", "4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_suite_alone_matches_all() {
    let all = json(&run(&["verify", "--seed", "5", "--trials", "2", "--degree", "4"]));
    let one = json(&run(&["verify", "--seed", "5", "--trials", "2", "--degree", "4", "--suite", "dual-route"]));
    assert_eq!(all["suites"][1], one["suites"][0]);
}

#[test]
fn verify_fock_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"dim": 2, "pi": {"x": [["1", "2"], ["-1", "0"]], "y": [[0, 1], [1, 0]]},
            "rho": {"x": [["2", "-1"], ["1", "1"]], "y": [[1, 0], [0, "1/2"]]}}"#,
    );
    let out = run(&["verify", "--suite", "fock", "--degree", "4", "--fixture", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["suites"][0]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"truncation": 2, "coeffs": ["1", "x"]}"#);
    assert_eq!(run(&["convolve", "--kind", "free", "--degree", "1", &bad, &bad]).status.code(), Some(2));
    assert_eq!(run(&["convolve", "--kind", "nope", "--degree", "1", &bad]).status.code(), Some(2));
    assert_eq!(run(&["partitions", "--class", "XYZ", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["clt", "--alpha2", "1/0", "--beta2", "1", "--gamma2", "1"]).status.code(), Some(2));
    assert_eq!(run(&["cumulants", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--degree", "0"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_one() {
    // zero variances: every error is 0 at each step, so nothing strictly decreases
    let out = run(&["clt", "--alpha2", "0", "--beta2", "0", "--gamma2", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["errors_decrease"], false);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["status"], "check_failed");
}
