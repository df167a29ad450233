use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cocycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(args)
        .env_remove("COCYCLE_CONFIG")
        .output()
        .expect("run cocycle")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn catalog_lists_every_knot() {
    let out = cocycle(&["catalog"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in cocycle_core::catalog::NAMES {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn invariants_as_json() {
    let out = cocycle(&["invariants", "figure-eight", "--crossings"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["v2"], -1);
    assert_eq!(v["v2_mod2"], 1);
    assert_eq!(v["generic"], true);
    assert_eq!(v["crossings"].as_array().unwrap().len(), 4);
}

#[test]
fn evaluation_agrees_and_is_reproducible() {
    let run = || cocycle(&["evaluate", "rotation", "trefoil", "--ns", "1024", "--seed", "5"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["value"]["parity"], 1);
    assert_eq!(v["prediction"], 1);
    assert_eq!(v["agreement"], true);
}

#[test]
fn report_writes_a_file() {
    let spec = scratch("spec.json");
    std::fs::write(&spec, r#"[{"kind": "rotation", "knots": ["unknot"]}, {"kind": "hat_flat", "knots": ["unknot"]}]"#)
        .unwrap();
    let dest = scratch("report.json");
    let out = cocycle(&["report", spec.to_str().unwrap(), "-o", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["value"]["parity"] == 0));
}

#[test]
fn build_cycle_closes() {
    let out = cocycle(&["build-cycle", "framed_drag", "kink+", "trefoil"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["framing"], serde_json::json!([1, 3]));
    assert!(v["closure_gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn svg_output() {
    let dest = scratch("trefoil.svg");
    let out = cocycle(&["svg", "trefoil", "-o", dest.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&dest).unwrap().starts_with("<svg"));
}

#[test]
fn errors_exit_with_one() {
    let out = cocycle(&["invariants", "no-such-knot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"samples": 3}"#).unwrap();
    let out = cocycle(&["--config", bad.to_str().unwrap(), "catalog"]);
    assert_eq!(out.status.code(), Some(1));

    let out = cocycle(&["evaluate", "spin", "trefoil"]);
    assert_eq!(out.status.code(), Some(1));
}
