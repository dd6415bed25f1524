//! A full workspace fixture over the identity-metric algebra: one of
//! every object kind, used by the integration and acceptance suites.

use crate::workspace::{JsonGauge, WorkspaceFile, SCHEMA_TAG};
use std::collections::BTreeMap;
use triole_core::algebra::TrioleAlgebra;
use triole_core::biderivation::BiDerivation;
use triole_core::derivation::GradedDerivation;
use triole_core::diffop::{MatDiffOp, PolyDiffOp};
use triole_core::json::{
    algebra_to_json, biderivation_to_json, connection_to_json, graded_derivation_to_json,
    module_to_json, morphism_to_json, poly_matrix_to_json, tridiffop_to_json,
};
use triole_core::poly::{Poly, ScalarDerivation};
use triole_core::tridiff::TriDiffOp;
use triole_core::trimodule::TruncatedTriModule;
use triole_core::{TriConnection, TrioleMorphism};

pub fn standard_algebra() -> TrioleAlgebra {
    TrioleAlgebra::identity_metric(2, 2)
}

/// Laplacian lifted to a degree-0 triple (valid at order 2).
pub fn laplacian_triple(alg: &TrioleAlgebra) -> TriDiffOp {
    let n = alg.n_vars;
    let mut lap = PolyDiffOp::zero(n);
    for i in 0..n {
        let mut sigma = vec![0u32; n];
        sigma[i] = 2;
        lap = lap.add(&PolyDiffOp::derivative(n, &sigma));
    }
    TriDiffOp::scalar_lift(&lap, alg)
}

/// The curved rank-2 connection Γ₁ = [[0, x₂], [−x₂, 0]], Γ₂ = 0.
pub fn curved_connection(alg: &TrioleAlgebra) -> TriConnection {
    let n = alg.n_vars;
    let mut c = TriConnection::zero(n, alg.m_p, alg.m_q);
    c.gamma[0][0][1] = Poly::var(n, 1);
    c.gamma[0][1][0] = -&Poly::var(n, 1);
    c
}

pub fn skew_derivation(alg: &TrioleAlgebra) -> GradedDerivation {
    let n = alg.n_vars;
    let mut g_mat = vec![vec![Poly::zero(n); alg.m_p]; alg.m_p];
    g_mat[0][1] = Poly::var(n, 0);
    g_mat[1][0] = -&Poly::var(n, 0);
    GradedDerivation::Deg0 {
        x_a: ScalarDerivation::partial(n, 0),
        g_mat,
        h_mat: vec![vec![Poly::zero(n); alg.m_q]; alg.m_q],
    }
}

pub fn standard_workspace() -> WorkspaceFile {
    let alg = standard_algebra();
    let n = alg.n_vars;

    let mut derivations = BTreeMap::new();
    derivations.insert(
        "X0".to_string(),
        graded_derivation_to_json(&skew_derivation(&alg)),
    );
    derivations.insert(
        "Y0".to_string(),
        graded_derivation_to_json(&GradedDerivation::Deg0 {
            x_a: ScalarDerivation::partial(n, 1),
            g_mat: vec![vec![Poly::zero(n); 2]; 2],
            h_mat: vec![vec![Poly::zero(n)]],
        }),
    );
    derivations.insert(
        "X1".to_string(),
        graded_derivation_to_json(&GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::partial(n, 0), ScalarDerivation::zero(n)],
            vec![vec![Poly::var(n, 1), Poly::zero(n)]],
        )),
    );
    derivations.insert(
        "X2".to_string(),
        graded_derivation_to_json(&GradedDerivation::Deg2 {
            x_a2: vec![ScalarDerivation::new(vec![Poly::var(n, 0), Poly::one(n)])],
        }),
    );

    let mut connections = BTreeMap::new();
    connections.insert(
        "trivial".to_string(),
        connection_to_json(&TriConnection::zero(n, alg.m_p, alg.m_q)),
    );
    connections.insert(
        "curved".to_string(),
        connection_to_json(&curved_connection(&alg)),
    );

    let mut biderivations = BTreeMap::new();
    let mut pi = vec![vec![Poly::zero(n); n]; n];
    pi[0][1] = Poly::one(n);
    pi[1][0] = Poly::from_int(n, -1);
    biderivations.insert(
        "symplectic".to_string(),
        biderivation_to_json(&BiDerivation::symplectic_lift(&alg, &pi)),
    );

    let mut diffops = BTreeMap::new();
    diffops.insert(
        "laplacian".to_string(),
        tridiffop_to_json(&laplacian_triple(&alg)),
    );
    diffops.insert(
        "q_op".to_string(),
        tridiffop_to_json(&TriDiffOp::Deg2 {
            a: MatDiffOp::from_fn(n, 1, 1, |_, _| PolyDiffOp::derivative(n, &[1, 1])),
        }),
    );

    let mut modules = BTreeMap::new();
    modules.insert(
        "regular".to_string(),
        module_to_json(&TruncatedTriModule::regular(&alg)),
    );

    let mut morphisms = BTreeMap::new();
    morphisms.insert(
        "identity".to_string(),
        morphism_to_json(&TrioleMorphism {
            psi1: vec![
                vec![Poly::one(n), Poly::zero(n)],
                vec![Poly::zero(n), Poly::one(n)],
            ],
            psi2: vec![vec![Poly::one(n)]],
        }),
    );

    let mut gauges = BTreeMap::new();
    gauges.insert(
        "shear".to_string(),
        JsonGauge {
            rho_p: poly_matrix_to_json(&[
                vec![Poly::one(n), Poly::var(n, 0)],
                vec![Poly::zero(n), Poly::one(n)],
            ]),
            rho_q: poly_matrix_to_json(&[vec![Poly::one(n)]]),
        },
    );

    WorkspaceFile {
        schema: SCHEMA_TAG.to_string(),
        algebra: algebra_to_json(&alg),
        derivations,
        connections,
        biderivations,
        diffops,
        modules,
        morphisms,
        gauges,
    }
}
