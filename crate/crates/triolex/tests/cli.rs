//! End-to-end tests of the binary: exit-code contract, determinism and
//! serialization round trips on the full fixture workspace.

use std::io::Write;
use std::process::{Command, Output};
use triolex::fixture::standard_workspace;
use triolex::workspace::{Workspace, WorkspaceFile};

fn write_fixture(dir: &tempfile::TempDir) -> std::path::PathBuf {
    let path = dir.path().join("workspace.json");
    let text = serde_json::to_string(&standard_workspace()).unwrap();
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triolex"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn validate_good_workspace_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], serde_json::Value::Bool(true));
}

#[test]
fn validate_symmetry_violation_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut ws = standard_workspace();
    // break the metric's symmetry under the plain convention
    ws.algebra.g[0][0][1] = vec![triole_core::json::JsonTerm {
        exp: vec![0, 0],
        num: serde_json::Number::from(1),
        den: serde_json::Number::from(1),
    }];
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&ws).unwrap()).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], serde_json::Value::Bool(false));
    assert_eq!(
        report["algebra"]["witness"]["indices"],
        serde_json::json!([1, 2])
    );
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wrong_schema_tag_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut ws = standard_workspace();
    ws.schema = "triolex/99".into();
    let path = dir.path().join("schema.json");
    std::fs::write(&path, serde_json::to_string(&ws).unwrap()).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let a = run(&["validate", path.to_str().unwrap()]);
    let b = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    for cmd in ["curvature", "flat-check"] {
        let a = run(&[
            "analyze",
            path.to_str().unwrap(),
            "--cmd",
            cmd,
            "--target",
            "curved",
        ]);
        let b = run(&[
            "analyze",
            path.to_str().unwrap(),
            "--cmd",
            cmd,
            "--target",
            "curved",
        ]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn analyze_curvature_lists_nonzero_components() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "curvature",
        "--target",
        "curved",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rp = v["result"]["rp_nonzero"].as_array().unwrap();
    assert_eq!(rp.len(), 1);
    assert_eq!(rp[0]["i"], serde_json::json!(1));
    assert_eq!(rp[0]["j"], serde_json::json!(2));
    assert_eq!(v["result"]["flat_q"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_poisson_check_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "poisson-check",
        "--target",
        "symplectic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let conds = &v["result"]["deg0_conditions"];
    for c in ["cond1", "cond2", "cond3", "cond4"] {
        assert_eq!(conds[c], serde_json::Value::Bool(true), "{c}");
    }
    assert_eq!(
        v["result"]["schouten_zero"]["zero"],
        serde_json::Value::Bool(true)
    );
}

#[test]
fn analyze_h0_trivial_connection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "h0",
        "--target",
        "trivial",
        "--dmax",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["dimension"], serde_json::json!(2));
}

#[test]
fn analyze_unknown_target_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "curvature",
        "--target",
        "missing",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown"));
}

#[test]
fn analyze_bracket_and_gauge() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_fixture(&dir);
    let out = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "bracket",
        "--target",
        "X0,Y0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["deg"], serde_json::json!(0));
    let out2 = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--cmd",
        "gauge",
        "--target",
        "shear",
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let v2: serde_json::Value = serde_json::from_slice(&out2.stdout).unwrap();
    assert_eq!(v2["result"]["mP"], serde_json::json!(2));
}

#[test]
fn workspace_round_trip_is_identity_on_canonical_forms() {
    let ws = standard_workspace();
    let text = serde_json::to_string(&ws).unwrap();
    let parsed: WorkspaceFile = serde_json::from_str(&text).unwrap();
    let re_emitted = serde_json::to_string(&parsed).unwrap();
    assert_eq!(text, re_emitted);
    // resolving and re-serializing the resolved objects is stable too
    let resolved = Workspace::resolve(parsed).unwrap();
    let alg_json = triole_core::json::algebra_to_json(&resolved.algebra);
    assert_eq!(
        serde_json::to_string(&alg_json).unwrap(),
        serde_json::to_string(&ws.algebra).unwrap()
    );
}
