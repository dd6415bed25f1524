//! Analysis commands: each operation behind a common trait object,
//! registered by name and selected at runtime via `--cmd`.

use crate::workspace::Workspace;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use triole_core::algebra::gauge_act;
use triole_core::biderivation::{poisson_check_deg0, schouten_square, BiDerivation};
use triole_core::connection::{compat_is_zero, curvature, flat_check};
use triole_core::derivation::bracket;
use triole_core::form::nabla_constant_sections;
use triole_core::json::{
    algebra_to_json, graded_derivation_to_json, matop_to_json, op_to_json, poly_matrix_to_json,
    symbol_to_json,
};
use triole_core::tridiff::{atiyah_k_decompose, TriDiffOp};

pub struct AnalyzeOpts {
    pub target: String,
    pub dmax: u32,
}

/// One named analysis; implementations are registered in [`registry`].
pub trait AnalysisCommand {
    fn name(&self) -> &'static str;
    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String>;
}

pub fn registry() -> Vec<Box<dyn AnalysisCommand>> {
    vec![
        Box::new(CurvatureCmd),
        Box::new(FlatCheckCmd),
        Box::new(PoissonCheckCmd),
        Box::new(SymbolCmd),
        Box::new(AtiyahCmd),
        Box::new(H0Cmd),
        Box::new(BracketCmd),
        Box::new(GaugeCmd),
    ]
}

pub fn find(name: &str) -> Option<Box<dyn AnalysisCommand>> {
    registry().into_iter().find(|c| c.name() == name)
}

fn connection<'w>(
    ws: &'w Workspace,
    target: &str,
) -> Result<&'w triole_core::TriConnection, String> {
    ws.connections
        .get(target)
        .ok_or_else(|| format!("unknown connection {target:?}"))
}

struct CurvatureCmd;

impl AnalysisCommand for CurvatureCmd {
    fn name(&self) -> &'static str {
        "curvature"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let c = connection(ws, &opts.target)?;
        let curv = curvature(c, &ws.algebra);
        let n = ws.algebra.n_vars;
        let mut rp = Vec::new();
        let mut rq = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = &curv.rp[i][j];
                let nonzero = (0..m.rows).any(|r| (0..m.cols).any(|cc| !m.entry(r, cc).is_zero()));
                if nonzero {
                    let rows: Vec<Vec<triole_core::Poly>> = (0..m.rows).map(|r| m.row(r)).collect();
                    rp.push(json!({
                        "i": i + 1,
                        "j": j + 1,
                        "matrix": poly_matrix_to_json(&rows),
                    }));
                }
                let mq = &curv.rq[i][j];
                let nonzero_q =
                    (0..mq.rows).any(|r| (0..mq.cols).any(|cc| !mq.entry(r, cc).is_zero()));
                if nonzero_q {
                    let rows: Vec<Vec<triole_core::Poly>> =
                        (0..mq.rows).map(|r| mq.row(r)).collect();
                    rq.push(json!({
                        "i": i + 1,
                        "j": j + 1,
                        "matrix": poly_matrix_to_json(&rows),
                    }));
                }
            }
        }
        Ok(json!({
            "rp_nonzero": rp,
            "rq_nonzero": rq,
            "flat_p": curv.rp_is_zero(),
            "flat_q": curv.rq_is_zero(),
        }))
    }
}

struct FlatCheckCmd;

impl AnalysisCommand for FlatCheckCmd {
    fn name(&self) -> &'static str {
        "flat-check"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let c = connection(ws, &opts.target)?;
        let rep = flat_check(c, &ws.algebra);
        serde_json::to_value(rep).map_err(|e| e.to_string())
    }
}

struct PoissonCheckCmd;

impl AnalysisCommand for PoissonCheckCmd {
    fn name(&self) -> &'static str {
        "poisson-check"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let pi = ws
            .biderivations
            .get(&opts.target)
            .ok_or_else(|| format!("unknown biderivation {:?}", opts.target))?;
        let schouten = schouten_square(pi, &ws.algebra);
        let mut out = BTreeMap::new();
        out.insert(
            "schouten_zero".to_string(),
            serde_json::to_value(&schouten).map_err(|e| e.to_string())?,
        );
        if matches!(pi, BiDerivation::Deg0 { .. }) {
            let rep = poisson_check_deg0(pi, &ws.algebra);
            out.insert(
                "deg0_conditions".to_string(),
                serde_json::to_value(rep).map_err(|e| e.to_string())?,
            );
        }
        serde_json::to_value(out).map_err(|e| e.to_string())
    }
}

struct SymbolCmd;

impl AnalysisCommand for SymbolCmd {
    fn name(&self) -> &'static str {
        "symbol"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let (op, k) = ws
            .diffops
            .get(&opts.target)
            .ok_or_else(|| format!("unknown diffop {:?}", opts.target))?;
        let mut out = BTreeMap::new();
        match op {
            TriDiffOp::Deg0 { a, p, q } => {
                out.insert(
                    "a".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &a.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
                out.insert(
                    "p".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &p.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
                out.insert(
                    "q".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &q.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
            }
            TriDiffOp::Deg1 { a, p } => {
                out.insert(
                    "a".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &a.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
                out.insert(
                    "p".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &p.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
            }
            TriDiffOp::Deg2 { a } => {
                out.insert(
                    "a".to_string(),
                    serde_json::to_value(symbol_to_json(
                        &a.principal_symbol(*k).map_err(|e| e.to_string())?,
                    ))
                    .unwrap(),
                );
            }
        }
        serde_json::to_value(out).map_err(|e| e.to_string())
    }
}

struct AtiyahCmd;

impl AnalysisCommand for AtiyahCmd {
    fn name(&self) -> &'static str {
        "atiyah"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let (op, k) = ws
            .diffops
            .get(&opts.target)
            .ok_or_else(|| format!("unknown diffop {:?}", opts.target))?;
        let dec = atiyah_k_decompose(op, &ws.algebra, *k).map_err(|e| e.to_string())?;
        Ok(json!({
            "scalar": op_to_json(&dec.scalar),
            "kernelP": matop_to_json(&dec.kernel_p),
            "kernelQ": matop_to_json(&dec.kernel_q),
            "kernel_order": dec.kernel_order,
            "g_relation_holds": dec.g_relation_holds,
        }))
    }
}

struct H0Cmd;

impl AnalysisCommand for H0Cmd {
    fn name(&self) -> &'static str {
        "h0"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let c = connection(ws, &opts.target)?;
        let basis = nabla_constant_sections(c, &ws.algebra, opts.dmax);
        Ok(json!({
            "dmax": opts.dmax,
            "dimension": basis.len(),
            "basis": basis
                .iter()
                .map(|v| poly_matrix_to_json(std::slice::from_ref(v)))
                .collect::<Vec<_>>(),
            "metric_compatible": compat_is_zero(c, &ws.algebra),
        }))
    }
}

struct BracketCmd;

impl AnalysisCommand for BracketCmd {
    fn name(&self) -> &'static str {
        "bracket"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let (xname, yname) = opts
            .target
            .split_once(',')
            .ok_or_else(|| "bracket target must be \"X,Y\"".to_string())?;
        let x = ws
            .derivations
            .get(xname.trim())
            .ok_or_else(|| format!("unknown derivation {xname:?}"))?;
        let y = ws
            .derivations
            .get(yname.trim())
            .ok_or_else(|| format!("unknown derivation {yname:?}"))?;
        let z = bracket(x, y, &ws.algebra).map_err(|e| e.to_string())?;
        serde_json::to_value(graded_derivation_to_json(&z)).map_err(|e| e.to_string())
    }
}

struct GaugeCmd;

impl AnalysisCommand for GaugeCmd {
    fn name(&self) -> &'static str {
        "gauge"
    }

    fn run(&self, ws: &Workspace, opts: &AnalyzeOpts) -> Result<Value, String> {
        let (rho_p, rho_q) = ws
            .gauges
            .get(&opts.target)
            .ok_or_else(|| format!("unknown gauge {:?}", opts.target))?;
        let acted = gauge_act(rho_p, rho_q, &ws.algebra).map_err(|e| e.to_string())?;
        serde_json::to_value(algebra_to_json(&acted)).map_err(|e| e.to_string())
    }
}
