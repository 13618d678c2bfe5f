//! End-to-end runs of the binary: exit codes, diagnostics and golden reports.

use std::path::PathBuf;
use std::process::Command;

use balobs_core::dsl::registry;
use serde_json::Value;

const IWASAWA_DIRECTION: &str = "a11=0.15,a12=0.25-0.1i,a21=0.05+0.2i,a22=-0.125,a31=0.1i,a32=0.075";
const FD_RELATIVE_TOL: f64 = 1e-8;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn balobs(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_balobs")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn obstruction_example_exits_zero() {
    let r = balobs(&["obstruction", "--registry", "iwasawa", "--convention", "paper-literal"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("condition [1] e1^e2^~e1^~e2^~e3:"));
}

#[test]
fn verdict_example_is_obstructed() {
    let r = balobs(&[
        "verdict", "--registry", "nakamura-ii", "--assign", "a1=0,a2=1,a3=0", "--metric-sample", "identity",
    ]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert_eq!(r.stdout.lines().last(), Some("obstructed"));
}

#[test]
fn mc_residual_example() {
    let r = balobs(&["mc-residual", "--registry", "iwasawa"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("curve family: residual 0 (identically in t)"));
    let nak = balobs(&["mc-residual", "--registry", "nakamura-i"]);
    assert_eq!(nak.code, 2);
    assert!(nak.stdout.contains("curve kur2: residual nonzero at t^2"));
}

#[test]
fn verdict_without_values_is_conditional() {
    let r = balobs(&["verdict", "--registry", "iwasawa"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().last(), Some("conditional"));
    let zero = balobs(&[
        "verdict", "--registry", "nakamura-ii", "--assign", "a1=0,a2=0,a3=0", "--metric-sample", "identity",
    ]);
    assert_eq!(zero.code, 0);
    assert_eq!(zero.stdout.lines().last(), Some("no-first-order-obstruction"));
}

#[test]
fn golden_symbolic_reports() {
    let cases: [(&str, &[&str]); 3] = [
        ("nakamura-ii-conditions.json", &["conditions", "--registry", "nakamura-ii", "--format", "json"]),
        (
            "iwasawa-obstruction-paper-literal.json",
            &["obstruction", "--registry", "iwasawa", "--convention", "paper-literal", "--format", "json"],
        ),
        (
            "nakamura-i-verdict.json",
            &[
                "verdict", "--registry", "nakamura-i", "--assign", "a11=0,a12=0,a13=0,a21=0,a23=0,a31=0,a32=0",
                "--metric-sample", "identity", "--format", "json",
            ],
        ),
    ];
    for (file, args) in cases {
        let r = balobs(args);
        assert_eq!(r.stdout, fixture(file), "{file}");
    }
}

#[test]
fn nakamura_ii_fixture_lists_the_displayed_conditions() {
    let m = registry("nakamura-ii").unwrap();
    let expected: Vec<String> = [
        "a3*(alpha23*~alpha23 - alpha22*alpha33) + a1*(i*alpha22*alpha13 - alpha12*alpha23)",
        "a2*(alpha23*~alpha23 - alpha22*alpha33) + a1*(i*alpha33*alpha12 + alpha13*~alpha23)",
    ]
    .iter()
    .map(|s| m.function(s).unwrap().normalized().to_string())
    .collect();
    let v: Value = serde_json::from_str(&fixture("nakamura-ii-conditions.json")).unwrap();
    let got: Vec<String> = v["curves"][0]["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn empty_condition_list_layout() {
    let r = balobs(&["conditions", "--registry", "nakamura-i", "--format", "json"]);
    assert!(r
        .stdout
        .contains(r#"{"curve": "kur3", "conditions": [], "verdict": "no-first-order-obstruction"}"#));
}

fn numbers_close(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            x.keys().eq(y.keys()) && x.iter().all(|(k, v)| numbers_close(v, &y[k]))
        }
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(u, v)| numbers_close(u, v))
        }
        (Value::String(x), Value::String(y)) => match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(u), Ok(v)) => (u - v).abs() <= FD_RELATIVE_TOL * u.abs().max(v.abs()),
            _ => x == y,
        },
        _ => a == b,
    }
}

#[test]
fn fd_report_schema() {
    let r = balobs(&[
        "verify-theorem", "--registry", "iwasawa", "--metric-sample", "identity", "--assign", IWASAWA_DIRECTION,
        "--format", "json",
    ]);
    assert_eq!(r.code, 0);
    let got: Value = serde_json::from_str(&r.stdout).unwrap();
    let want: Value = serde_json::from_str(&fixture("iwasawa-fd.json")).unwrap();
    assert!(numbers_close(&got, &want), "{}", r.stdout);
    let c = &got["curves"][0];
    for key in ["steps", "errors", "orders", "order"] {
        assert!(!c[key].is_null(), "{key}");
    }
    let mantissa = c["order"].as_str().unwrap().split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 15);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let runs: [&[&str]; 3] = [
        &["obstruction", "--registry", "nakamura-i", "--format", "json"],
        &["cohomology", "--registry", "nakamura-i", "--format", "json"],
        &["verify-theorem", "--registry", "iwasawa", "--metric-sample", "identity", "--assign", IWASAWA_DIRECTION, "--format", "json"],
    ];
    for args in runs {
        let first = balobs(args).stdout;
        for _ in 0..3 {
            assert_eq!(balobs(args).stdout, first);
        }
    }
}

#[test]
fn usage_errors_exit_one() {
    let cases: [&[&str]; 9] = [
        &["obstruction"],
        &["obstruction", "--registry", "iwasawa", "--model", "x.balg"],
        &["obstruction", "--registry", "iwasawa", "--convention", "kahler"],
        &["verdict", "--registry", "iwasawa", "--assign", "a11"],
        &["verdict", "--registry", "iwasawa", "--assign", "zz=1"],
        &["verdict", "--registry", "iwasawa", "--assign", "alpha11=1+1i"],
        &["verdict", "--registry", "iwasawa", "--assign", "t=1"],
        &["obstruction", "--registry", "kodaira"],
        &["verify-theorem", "--registry", "iwasawa", "--metric-sample", "identity"],
    ];
    for args in cases {
        let r = balobs(args);
        assert_eq!(r.code, 1, "{args:?}");
        assert!(r.stdout.is_empty());
        assert!(r.stderr.starts_with("error"), "{args:?}: {}", r.stderr);
    }
    assert_eq!(balobs(&["--help"]).code, 0);
    assert_eq!(balobs(&["verify-theorem", "--registry", "iwasawa", "--fd-steps", "0"]).code, 1);
}

#[test]
fn syntax_errors_show_the_source_line() {
    let path = scratch("dangling.balg", "model \"m\"\ndim 3\nd e3 = e1 ^\n");
    let r = balobs(&["obstruction", "--model", &path]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stderr,
        format!("error: {path}:3:12: syntax error: expected an operand, found end of line\n3 | d e3 = e1 ^\n  |            ^\n")
    );
}

#[test]
fn check_algebra_reports_failures_with_exit_two() {
    let path = scratch("dsq.balg", "dim 3\nd e1 = e1 ^ e3\nd e3 = e1 ^ e2\n");
    let r = balobs(&["check-algebra", "--model", &path]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("d(d e3) != 0"));
    assert!(r.stdout.contains("fails"));
    assert_eq!(balobs(&["check-algebra", "--registry", "nakamura-i"]).code, 0);
}

#[test]
fn check_balanced() {
    assert_eq!(balobs(&["check-balanced", "--registry", "iwasawa"]).code, 0);
    let lit = balobs(&["check-balanced", "--registry", "iwasawa", "--convention", "paper-literal"]);
    assert_eq!(lit.code, 0);
    assert!(lit.stdout.contains("not real"));
    let path = scratch("mixed.balg", "dim 3\nd e3 = e1 ^ ~e1\nmetric g { 1, 0, 0; 0, 1, 0; 0, 0, 1 }\n");
    let r = balobs(&["check-balanced", "--model", &path]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("balanced fails"));
}

#[test]
fn cohomology_totals() {
    let r = balobs(&["cohomology", "--registry", "nakamura-ii"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().last(), Some("dim H^{0,1} = 1"));
}

#[test]
fn model_file_matches_registry() {
    let m = registry("nakamura-ii").unwrap();
    let path = scratch("nakamura-ii.balg", &m.print());
    let from_file = balobs(&["conditions", "--model", &path, "--format", "json"]);
    let from_registry = balobs(&["conditions", "--registry", "nakamura-ii", "--format", "json"]);
    assert_eq!(from_file.stdout, from_registry.stdout);
}

#[test]
fn metric_sample_file() {
    let sample = scratch("sample.txt", "# diagonal metric\nalpha11=2, alpha22=2\nalpha33=2\nalpha12=0\nalpha13=0\nalpha23=0\n");
    let r = balobs(&["verdict", "--registry", "nakamura-ii", "--assign", "a1=0,a2=1,a3=0", "--metric-sample", &sample]);
    assert_eq!(r.code, 2);
    let bad = scratch("indefinite.txt", "alpha11=-1, alpha22=1, alpha33=1, alpha12=0, alpha13=0, alpha23=0\n");
    let r = balobs(&["verdict", "--registry", "nakamura-ii", "--assign", "a1=0,a2=1,a3=0", "--metric-sample", &bad]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("positive definite"));
}
