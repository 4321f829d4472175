use std::process::Command;

use serde_json::{json, Value};
use valivt::cli::run;

const WEIERSTRASS: &str = "head: [t, 1]; tail: geometric(t, 1, 2)";

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["valivt"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let (code, out, _) = call(&argv);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn polygon_json() {
    let (code, v) = call_json(&["polygon", "--poly", "X^2 - t"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "valivt/1");
    assert_eq!(v["slopes"], json!([{"h": "1/2", "mult": 2}]));
    assert_eq!(
        v["phi"],
        json!([
            {"segment": ["-inf", "1/2"], "slope": 2, "intercept": "0/1"},
            {"segment": ["1/2", "inf"], "slope": 0, "intercept": "1/1"},
        ])
    );
}

#[test]
fn phi_csv() {
    let (code, out, _) = call(&["phi", "--poly", "X^2 - t", "--sample", "0:1:1/2", "--csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "gamma,phi\n0/1,0/1\n1/2,1/1\n1/1,1/1\n");
}

#[test]
fn ivt_square_root() {
    let (code, v) = call_json(&["ivt", "--poly", "X^2 - t", "--a", "t", "--b", "1", "--alpha", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["c"], "t^(1/4)");
    assert_eq!(v["v_c"], "1/4");
    assert_eq!(v["achieved"], "1/2");
    assert_eq!(v["case"], "segment-inversion");
}

#[test]
fn ivt_count_enumerates_residues() {
    let (code, v) =
        call_json(&["--field", "padic:3", "ivt", "--poly", "X - 1", "--a", "1", "--b", "3", "--alpha", "1", "--count", "3"]);
    assert_eq!(code, 0);
    let cs: Vec<&str> = v["solutions"].as_array().unwrap().iter().map(|s| s["c"].as_str().unwrap()).collect();
    assert_eq!(cs.len(), 3);
    for s in v["solutions"].as_array().unwrap() {
        assert_eq!(s["achieved"], "1/1");
    }
}

#[test]
fn witness_errors_exit_2() {
    let (code, v) = call_json(&["--field", "laurent", "ivt", "--poly", "X^2", "--a", "t", "--b", "t^-1", "--alpha", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "DivisibilityError");
    let (code, v) = call_json(&["--field", "padic:2", "ivt", "--poly", "X^2 - X", "--a", "1/2", "--b", "3", "--alpha", "0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ExhaustedResidues");
}

#[test]
fn input_errors_exit_4() {
    let (code, v) = call_json(&["polygon", "--poly", "X^^2"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "SyntaxError");
    let (code, _, err) = call(&["bogus"]);
    assert_eq!(code, 4);
    assert!(err.contains("bogus"));
    let (code, _, err) = call(&["--field", "padic:3", "series", "factor", "--series", WEIERSTRASS]);
    assert_eq!(code, 4);
    assert!(err.contains("field mismatch"));
}

#[test]
fn series_factor_json() {
    let (code, v) = call_json(&["--precision", "4", "series", "factor", "--series", WEIERSTRASS]);
    assert_eq!(code, 0);
    assert_eq!(v["N"], 1);
    assert_eq!(v["P"], "X + (t + t^3 + O(t^4))");
    assert_eq!(v["P_coeffs"][0], json!({"value": "t + t^3 + O(t^4)", "precision": "4/1"}));
    assert_eq!(v["P_coeffs"][1], json!({"value": "1", "precision": null}));
}

#[test]
fn series_zeros_and_ivt() {
    let (code, v) = call_json(&["series", "zeros", "--series", WEIERSTRASS]);
    assert_eq!(code, 0);
    assert_eq!(v["zeros"], json!([{"h": "1/1", "mult": 1}]));
    let (code, v) = call_json(&["series", "ivt", "--series", WEIERSTRASS, "--a", "t", "--b", "1", "--alpha", "1/2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["achieved"], "1/2");
    assert_eq!(v["c"], "t^(1/2)");
}

#[test]
fn counterexamples() {
    let (code, v) = call_json(&["counterexample", "finite-residue", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["conclusion"], "ivt_fails_as_predicted");
    let (code, v) = call_json(&["counterexample", "divisibility", "--n", "3", "--h", "2"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let (code, v) = call_json(&["counterexample", "divisibility", "--n", "2", "--h", "4"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "InvalidCounterexample");
    let (code, v) = call_json(&["--field", "padic:3", "counterexample", "locally-constant", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["conclusion"], "ivt_fails_as_predicted");
}

#[test]
fn binary_reads_precision_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_valivt"))
        .args(["--json", "series", "factor", "--series", WEIERSTRASS])
        .env("VALIVT_PRECISION", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision"], "3/1");
    assert_eq!(v["P"], "X + (t + O(t^3))");
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_valivt")).args(args).output().unwrap().status.code();
    assert_eq!(status(&["polygon", "--poly", "X^2 - t"]), Some(0));
    assert_eq!(status(&["--field", "laurent", "ivt", "--poly", "X^2", "--a", "t", "--b", "t^-1", "--alpha", "1"]), Some(2));
    assert_eq!(status(&["polygon"]), Some(4));
}
