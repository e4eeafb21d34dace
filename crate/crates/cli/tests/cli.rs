use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circle-deform")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (code, v)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("circle-deform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn universal_map_passes() {
    let (code, v) = report(&["verify-homomorphism", "--map", "universal", "--symbolic", "--window", "2", "--floor", "-6"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["details"]["pairs_checked"], 25);
}

#[test]
fn standard_map_passes() {
    let (code, v) = report(&["verify-homomorphism", "--map", "standard", "--window", "6"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
}

#[test]
fn table_missing_third_coefficient_fails() {
    let table = r#"{
        "basis": "fourier", "floor": -4, "exact": false,
        "grades": {
            "1": {"0": "1"}, "0": {"1": "λ"}, "-1": {"2": "λ^2/2 - μ^2/2"},
            "-2": {"3": "λ^3/6 - λ*μ^2/2 + μ^3/3"}
        }
    }"#;
    let path = temp_file("bad.json", table);
    let (code, v) = report(&["verify-homomorphism", "--map", "table", path.to_str().unwrap(), "--window", "2", "--floor", "-4"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["details"]["first_bad_grade"], -3);
}

#[test]
fn recursion_reports_obstruction() {
    let (code, v) = report(&["solve-recursion", "--order", "5"]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "obstruction");
    let obs = &v["details"]["obstructions"][0];
    assert_eq!(obs["integrability_quotient"], "2");
    assert_eq!(obs["primitive"], "6*c0^3*c2 - 3*c0^2*c1^2 - 18*c0*c1*c2 + 8*c1^3 + 9*c2^2");
}

#[test]
fn recursion_on_the_locus_passes() {
    let (code, v) = report(&["solve-recursion", "--variety", "plus", "--symbolic", "--order", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["matches_universal_closed_form"], true);
    let (code, _) = report(&["solve-recursion", "--c0", "1", "--c1", "0", "--c2", "0", "--order", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn integrability_check() {
    let (code, v) = report(&["check-integrability", "--c0", "0", "--c1", "1", "--c2", "0"]);
    assert_eq!((code, &v["details"]["integrability_lhs"]), (2, &Value::from("8")));
    let (code, v) = report(&["check-integrability", "--variety", "minus", "--params", "λ=2,μ=-1/3"]);
    assert_eq!((code, &v["verdict"]), (0, &Value::from("pass")));
}

#[test]
fn formal_solve_with_free_data() {
    let (code, v) = report(&[
        "formal-solve", "--c0", "1", "--c1", "0", "--c2", "0", "--order", "5",
        "--free", "2,-1=(1-λ^2)/2", "--free", "3,-2=(1+2*λ)*(1-λ)^2/6",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["details"]["alpha"]["4,-3"], "-1/8*λ^4 + 1/3*λ^3 - 1/4*λ^2 + 1/24");
    let (code, _) = report(&["formal-solve", "--order", "2"]);
    assert_eq!(code, 3);
}

#[test]
fn cohomology_commands() {
    let (code, v) = report(&["cocycle-report", "--window", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["C2"]["homogeneity_degree"], 1);
    let (code, v) = report(&["coboundary-search", "--which", "1", "--window", "4", "--grades", "-3,1", "--modes", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["witness_found"], false);
}

#[test]
fn moment_map_and_central_extension_flag_errata() {
    let (code, v) = report(&["moment-map", "--params", "λ=1,μ=1"]);
    assert_eq!((code, &v["verdict"]), (0, &Value::from("erratum_detected")));
    assert_eq!(v["details"]["orbit"]["tag"], "one_sheet");
    let (_, v) = report(&["central-extension", "--symbolic"]);
    assert_eq!(v["verdict"], "erratum_detected");
    assert_eq!(v["details"]["ratio"], "0");
}

#[test]
fn errata_report_is_byte_stable() {
    let a = run(&["report-errata"]);
    let b = run(&["report-errata"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["verify-homomorphism", "--map", "universal", "--params", "λ=1/2,μ=3", "--window", "3", "--floor", "-5"];
    let one = Command::new(env!("CARGO_BIN_EXE_circle-deform")).args(args).env("CIRCLE_DEFORM_WORKERS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_circle-deform")).args(args).env("CIRCLE_DEFORM_WORKERS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn text_output() {
    let out = run(&["check-integrability", "--c0", "0", "--c1", "0", "--c2", "0", "--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: pass"));
}

#[test]
fn usage_errors_exit_4() {
    for args in [
        &["verify-homomorphism", "--map", "universal", "--params", "λ=1"][..],
        &["no-such-command"][..],
        &["verify-homomorphism", "--map", "table"][..],
        &["solve-recursion", "--order", "2"][..],
        &["moment-map", "--params", "nu=3"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(4), "{args:?}");
    }
}
