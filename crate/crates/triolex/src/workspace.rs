//! Self-describing workspace files: one algebra plus named collections
//! of derivations, connections, bi-derivations, differential operators,
//! truncated modules, morphisms and gauge pairs.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use triole_core::json::{
    algebra_from_json, biderivation_from_json, connection_from_json, graded_derivation_from_json,
    module_from_json, morphism_from_json, tridiffop_from_json, JsonAlgebra, JsonBiDerivation,
    JsonConnection, JsonDerivation, JsonModule, JsonMorphism, JsonTriDiffOp,
};
use triole_core::json::{poly_matrix_from_json, JsonPoly};
use triole_core::{GradedDerivation, Poly, TriConnection, TrioleAlgebra, TrioleMorphism};

pub const SCHEMA_TAG: &str = "triolex/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonGauge {
    #[serde(rename = "rhoP")]
    pub rho_p: Vec<Vec<JsonPoly>>,
    #[serde(rename = "rhoQ")]
    pub rho_q: Vec<Vec<JsonPoly>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkspaceFile {
    pub schema: String,
    pub algebra: JsonAlgebra,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub derivations: BTreeMap<String, JsonDerivation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub connections: BTreeMap<String, JsonConnection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub biderivations: BTreeMap<String, JsonBiDerivation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diffops: BTreeMap<String, JsonTriDiffOp>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, JsonModule>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, JsonMorphism>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gauges: BTreeMap<String, JsonGauge>,
}

/// Resolved in-memory workspace.
pub type GaugePair = (Vec<Vec<Poly>>, Vec<Vec<Poly>>);

pub struct Workspace {
    pub algebra: TrioleAlgebra,
    pub derivations: BTreeMap<String, GradedDerivation>,
    pub connections: BTreeMap<String, TriConnection>,
    pub biderivations: BTreeMap<String, triole_core::biderivation::BiDerivation>,
    pub diffops: BTreeMap<String, (triole_core::tridiff::TriDiffOp, usize)>,
    pub modules: BTreeMap<String, triole_core::trimodule::TruncatedTriModule>,
    pub morphisms: BTreeMap<String, TrioleMorphism>,
    pub gauges: BTreeMap<String, GaugePair>,
}

impl Workspace {
    pub fn resolve(file: WorkspaceFile) -> Result<Self, String> {
        if file.schema != SCHEMA_TAG {
            return Err(format!(
                "unsupported schema tag {:?} (expected {:?})",
                file.schema, SCHEMA_TAG
            ));
        }
        let algebra = algebra_from_json(&file.algebra).map_err(|e| e.to_string())?;
        let n = algebra.n_vars;
        let mut derivations = BTreeMap::new();
        for (name, j) in &file.derivations {
            derivations.insert(
                name.clone(),
                graded_derivation_from_json(j, n).map_err(|e| format!("derivation {name}: {e}"))?,
            );
        }
        let mut connections = BTreeMap::new();
        for (name, j) in &file.connections {
            connections.insert(
                name.clone(),
                connection_from_json(j, n).map_err(|e| format!("connection {name}: {e}"))?,
            );
        }
        let mut biderivations = BTreeMap::new();
        for (name, j) in &file.biderivations {
            biderivations.insert(
                name.clone(),
                biderivation_from_json(j, &algebra)
                    .map_err(|e| format!("biderivation {name}: {e}"))?,
            );
        }
        let mut diffops = BTreeMap::new();
        for (name, j) in &file.diffops {
            diffops.insert(
                name.clone(),
                (
                    tridiffop_from_json(j, n).map_err(|e| format!("diffop {name}: {e}"))?,
                    j.order,
                ),
            );
        }
        let mut modules = BTreeMap::new();
        for (name, j) in &file.modules {
            modules.insert(
                name.clone(),
                module_from_json(j, n).map_err(|e| format!("module {name}: {e}"))?,
            );
        }
        let mut morphisms = BTreeMap::new();
        for (name, j) in &file.morphisms {
            morphisms.insert(
                name.clone(),
                morphism_from_json(j, n).map_err(|e| format!("morphism {name}: {e}"))?,
            );
        }
        let mut gauges = BTreeMap::new();
        for (name, j) in &file.gauges {
            gauges.insert(
                name.clone(),
                (
                    poly_matrix_from_json(&j.rho_p, n).map_err(|e| format!("gauge {name}: {e}"))?,
                    poly_matrix_from_json(&j.rho_q, n).map_err(|e| format!("gauge {name}: {e}"))?,
                ),
            );
        }
        Ok(Workspace {
            algebra,
            derivations,
            connections,
            biderivations,
            diffops,
            modules,
            morphisms,
            gauges,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, WorkspaceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WorkspaceError::Parse(format!("cannot read {}: {e}", path.display())))?;
        let file: WorkspaceFile =
            serde_json::from_str(&text).map_err(|e| WorkspaceError::Parse(e.to_string()))?;
        Workspace::resolve(file).map_err(WorkspaceError::Parse)
    }
}

#[derive(Debug)]
pub enum WorkspaceError {
    /// Malformed JSON or schema violation: exit code 2.
    Parse(String),
}
