//! End-to-end checks of the `qmflab` binary: output formats, exit codes,
//! and seed determinism.

use std::process::{Command, Output};

fn qmflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmflab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn basis_json_output() {
    let out = qmflab(&[
        "basis", "--space", "W", "--weight", "10", "--parity", "-", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dimension"], 1);
    let row = v["basis"][0].as_array().unwrap();
    assert_eq!(row.len(), 11);
    assert_eq!(row[3], "-25/4");
}

#[test]
fn symbol_eval_exact_fraction() {
    // gcd(4, 6)^2 = 4 for the zero reciprocity polynomial with c0 = 1
    let out = qmflab(&[
        "symbol", "eval", "--weight", "2", "--recip", "0,0,0", "--c0", "1", "--h", "4", "--k", "6",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn symbol_hecke_value() {
    let out = qmflab(&[
        "symbol", "hecke", "--weight", "2", "--recip", "0,0,0", "--c0", "1", "--n", "2", "--h",
        "1", "--k", "0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "6");
}

#[test]
fn qmf_period_of_power_symbol() {
    // reciprocity h^2 - k^2 with c0 = 1 is the symbol h^2; its period
    // polynomial is h^2 - k^2 again
    let out = qmflab(&[
        "qmf", "period", "--weight", "2", "--recip", "-1,0,1", "--c0", "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(-1)*X^0*Y^2"), "{text}");
    assert!(text.contains("(1)*X^2*Y^0"), "{text}");
}

#[test]
fn manin_eigenvalue_is_tau_2() {
    let out = qmflab(&["manin", "eigen", "--n", "2", "--weight", "10", "--parity", "-"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-24");
}

#[test]
fn gamma02_chi_value() {
    let out = qmflab(&["gamma02", "chi", "--matrix", "11,-5,20,-9"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("zeta24^19"));
}

#[test]
fn diagram_check_passes_and_emits_json() {
    let out = qmflab(&["diagram-check", "--weight", "10", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["overall"], "pass");
}

#[test]
fn suite_reports_are_seed_deterministic() {
    let a = qmflab(&["manin-eigen", "--seed", "7", "--format", "json"]);
    let b = qmflab(&["manin-eigen", "--seed", "7", "--format", "json"]);
    assert!(a.status.success() && b.status.success());
    let strip = |s: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("millis");
        }
        v
    };
    assert_eq!(strip(&stdout(&a)), strip(&stdout(&b)));
}

#[test]
fn usage_errors_exit_2() {
    let out = qmflab(&["basis", "--space", "Q", "--weight", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmflab(&["no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmflab(&["symbol", "eval", "--weight", "2", "--recip", "1,1,1", "--c0", "0", "--h", "1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2), "invalid reciprocity is a usage error");
}

#[test]
fn sigma_series_check_command() {
    let out = qmflab(&["sigma", "series-check", "--order", "12"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("agree to order 12"));
}

#[test]
fn sigma_eval_command() {
    let out = qmflab(&["sigma", "eval", "--x", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).trim().starts_with("2 "));
}

#[test]
fn compat_denominator_guard() {
    // oversized denominators are rejected cleanly
    let out = qmflab(&["sigma", "eval", "--x", "1/2000001"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multiplier_compat_small_range() {
    let out = qmflab(&[
        "multiplier-compat", "--pmin", "5", "--pmax", "13", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["overall"], "pass");
    // 5, 7, 11, 13 plus the Gamma_0(10) value table
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn delta_hecke_check_command() {
    let out = qmflab(&["delta", "hecke-check", "--n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("tau = -24"));
}

#[test]
fn qmflab_threads_env_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_qmflab"))
        .env("QMFLAB_THREADS", "1")
        .args(["manin-eigen"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
