//! Workspace validation: runs the algebra validator and every
//! per-object validator, collecting pass/fail plus witnesses into one
//! deterministic report.

use crate::workspace::Workspace;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use triole_core::algebra::{validate_algebra, validate_morphism, MorphismClass};
use triole_core::biderivation::validate_biderivation;
use triole_core::connection::{compat_is_zero, validate_connection_shapes};
use triole_core::derivation::validate_derivation;
use triole_core::linalg::PolyMatrix;
use triole_core::report::ValidationReport;
use triole_core::tridiff::validate_diffop;
use triole_core::trimodule::validate_truncated_module;

fn report_json(kind: &str, rep: &ValidationReport, extra: Option<Value>) -> (Value, bool) {
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("valid".into(), json!(rep.valid));
    if let Some(w) = &rep.witness {
        obj.insert("witness".into(), serde_json::to_value(w).unwrap());
    }
    if let Some(Value::Object(m)) = extra {
        for (k, v) in m {
            obj.insert(k, v);
        }
    }
    (Value::Object(obj), rep.valid)
}

pub fn validate_workspace(ws: &Workspace) -> (Value, bool) {
    let alg = &ws.algebra;
    let mut objects: BTreeMap<String, Value> = BTreeMap::new();
    let mut all_valid = true;

    let alg_rep = validate_algebra(alg);
    let (alg_json, ok) = report_json("algebra", &alg_rep, None);
    all_valid &= ok;

    for (name, d) in &ws.derivations {
        let rep = validate_derivation(d, alg);
        let (v, ok) = report_json("derivation", &rep, None);
        all_valid &= ok;
        objects.insert(name.clone(), v);
    }
    for (name, c) in &ws.connections {
        let rep = validate_connection_shapes(c, alg);
        let extra = json!({ "metric_compatible": compat_is_zero(c, alg) });
        let (v, ok) = report_json("connection", &rep, Some(extra));
        all_valid &= ok;
        objects.insert(name.clone(), v);
    }
    for (name, pi) in &ws.biderivations {
        let rep = validate_biderivation(pi, alg);
        let (v, ok) = report_json("biderivation", &rep, None);
        all_valid &= ok;
        objects.insert(name.clone(), v);
    }
    for (name, (op, k)) in &ws.diffops {
        let rep = validate_diffop(op, alg, *k);
        let extra = json!({ "order": k });
        let (v, ok) = report_json("diffop", &rep, Some(extra));
        all_valid &= ok;
        objects.insert(name.clone(), v);
    }
    for (name, r) in &ws.modules {
        let rep = validate_truncated_module(r, alg);
        let (v, ok) = report_json("module", &rep, None);
        all_valid &= ok;
        objects.insert(name.clone(), v);
    }
    for (name, m) in &ws.morphisms {
        let (value, ok) = match validate_morphism(m, alg, alg) {
            Ok(class) => {
                let valid = class != MorphismClass::Invalid;
                (
                    json!({ "kind": "morphism", "valid": valid, "class": class }),
                    valid,
                )
            }
            Err(e) => (
                json!({ "kind": "morphism", "valid": false, "error": e.to_string() }),
                false,
            ),
        };
        all_valid &= ok;
        objects.insert(name.clone(), value);
    }
    for (name, (rho_p, rho_q)) in &ws.gauges {
        let ok = PolyMatrix::from_rows(rho_p.clone()).det_is_unit()
            && PolyMatrix::from_rows(rho_q.clone()).det_is_unit();
        all_valid &= ok;
        objects.insert(
            name.clone(),
            json!({ "kind": "gauge", "valid": ok, "unit_determinants": ok }),
        );
    }

    let report = json!({
        "schema": crate::workspace::SCHEMA_TAG,
        "algebra": alg_json,
        "objects": objects,
        "valid": all_valid,
    });
    (report, all_valid)
}
