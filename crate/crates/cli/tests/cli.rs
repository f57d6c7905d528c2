use std::process::{Command, Output};

use finortho::incomplete::{psi_poly, PsiParams};
use finortho::numkernel::rat;
use finortho::RationalPoly;
use serde_json::Value;

const PSI: [&str; 8] = ["--family", "psi", "--a", "-51", "--m", "2", "--r", "3"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finortho")).args(args).output().expect("binary runs")
}

fn psi_args<'a>(cmd: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v: Vec<&str> = cmd.to_vec();
    v.extend_from_slice(&PSI);
    v.extend_from_slice(&["--s", "1"]);
    v.extend_from_slice(extra);
    v
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn admissible_worked_example() {
    let out = run(&psi_args(&["admissible"], &[]));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["bound"], "91/4");
    assert_eq!(v["max_index"], 22);
    assert!(v["conditions"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn gen_first_odd_member() {
    let out = run(&["gen", "--family", "phi", "--n", "1", "--a", "1", "--b", "-200", "--m", "1", "--r", "0", "--s", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"parity":"odd","terms":[{"exp":1,"num":"1","den":"1"}]}"#
    );
}

#[test]
fn gen_output_round_trips() {
    for n in [0u32, 5, 22] {
        let out = run(&psi_args(&["gen"], &["--n", &n.to_string()]));
        assert_eq!(out.status.code(), Some(0));
        let back: RationalPoly = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(back, psi_poly(n, &PsiParams::new(rat(-51), 2, 3, 1)));
    }
}

#[test]
fn verify_all_worked_example() {
    let out = run(&psi_args(&["verify", "all"], &["--nmax", "22"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["gram"]["n_max"], 22);
    assert!(v["gram"]["max_offdiag_normalized"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_gram_json_fields() {
    let out = run(&psi_args(&["verify", "gram"], &["--nmax", "6", "--tol", "1e-9"]));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for key in ["family", "n_max", "gram", "formula_norms", "max_offdiag_normalized", "max_diag_relerr", "ode_residual_ok", "verdict", "tol_off", "tol_diag"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["gram"].as_array().unwrap().len(), 7);
    assert_eq!(v["tol_off"], 1e-9);
}

#[test]
fn exit_codes() {
    // beyond the maximum index
    assert_eq!(run(&psi_args(&["verify", "gram"], &["--nmax", "23"])).status.code(), Some(3));
    // missing family parameter
    assert_eq!(run(&["gen", "--family", "psi", "--n", "1", "--a", "-51"]).status.code(), Some(64));
    // unknown flag
    assert_eq!(run(&psi_args(&["gen"], &["--n", "1", "--bogus"])).status.code(), Some(64));
    // malformed number
    assert_eq!(run(&["norms", "--family", "N", "--p", "1/0", "--nmax", "2"]).status.code(), Some(64));
    // pole of the Bessel construction
    assert_eq!(run(&["gen", "--family", "bessel", "--alpha", "-2", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn inadmissible_report_skips_checks() {
    let out = run(&["verify", "all", "--family", "phi", "--a", "1", "--b", "1", "--m", "1", "--r", "0", "--s", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "fail");
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks[0]["name"], "admissibility");
    assert_eq!(checks[0]["status"], "fail");
    assert!(checks[1..].iter().all(|c| c["status"] == "skipped" && !c["detail"].as_str().unwrap().is_empty()));
}

#[test]
fn decimal_parameters_are_exact() {
    let strict = run(&["admissible", "--family", "phi", "--a", "-0.5", "--b", "-20", "--m", "1", "--r", "1", "--s", "1"]);
    let v = stdout_json(&strict);
    assert_eq!(v["family"]["a"], "-1/2");
    assert_eq!(strict.status.code(), Some(2));
    let lenient = run(&["admissible", "--family", "phi", "--a", "-0.5", "--b", "-20", "--m", "1", "--r", "1", "--s", "1", "--lenient"]);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(stdout_json(&lenient)["within_proven_range"], false);
}

#[test]
fn norms_csv_table() {
    let out = run(&psi_args(&["norms"], &["--nmax", "3", "--format", "csv"]));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,degree,sign,log10,value"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn approx_off_lattice_monomial() {
    let out = run(&psi_args(&["approx"], &["--nmax", "22", "--target", "monomial:3"]));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 23);
    assert!(v["relative_error"].as_f64().unwrap() > 1e-6);
}

#[test]
fn approx_from_table() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("exp_decay.csv");
    let mut body = String::from("x,y\n");
    for i in 0..=4000 {
        let x = i as f64 * 0.01;
        body.push_str(&format!("{x},{}\n", (-x).exp()));
    }
    std::fs::write(&path, body).unwrap();
    let target = format!("table:{}", path.display());
    let out = run(&["approx", "--family", "M", "--p", "12", "--q", "0", "--nmax", "3", "--target", &target]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["lower_accuracy"], true);
    assert!(!out.stderr.is_empty());
}
