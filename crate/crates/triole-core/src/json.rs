//! JSON wire formats.
//!
//! Polynomials serialize as arrays of `{"exp":[e₁..eₙ],"num":…,"den":…}`
//! in graded-lex order with coprime num/den and positive den; operators
//! as arrays of `{"dexp":[..],"coeff":Poly}`. Parsing normalizes,
//! emission is canonical, so parse ∘ emit = id on canonical forms.

use crate::algebra::{Convention, Submodule, TrioleAlgebra, TrioleMorphism};
use crate::biderivation::{BiDerivation, DerData, DerGpq, PpComponent};
use crate::connection::TriConnection;
use crate::derivation::GradedDerivation;
use crate::diffop::{MatDiffOp, PolyDiffOp};
use crate::poly::{Poly, ScalarDerivation};
use crate::symbol::SymbolTensor;
use crate::tridiff::TriDiffOp;
use crate::trimodule::TruncatedTriModule;
use crate::CalcError;
use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Vec<u32>,
    pub num: serde_json::Number,
    pub den: serde_json::Number,
}

pub type JsonPoly = Vec<JsonTerm>;

fn bigint_to_number(v: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&v.to_string()).expect("integer literal")
}

fn number_to_bigint(n: &serde_json::Number) -> Result<BigInt, CalcError> {
    BigInt::from_str(&n.to_string()).map_err(|_| CalcError::Invalid(format!("not an integer: {n}")))
}

pub fn poly_to_json(p: &Poly) -> JsonPoly {
    p.terms()
        .map(|(m, c)| JsonTerm {
            exp: m.0.clone(),
            num: bigint_to_number(c.numer()),
            den: bigint_to_number(c.denom()),
        })
        .collect()
}

pub fn poly_from_json(j: &JsonPoly, n_vars: usize) -> Result<Poly, CalcError> {
    let mut p = Poly::zero(n_vars);
    for term in j {
        if term.exp.len() != n_vars {
            return Err(CalcError::RingMismatch {
                expected: n_vars,
                got: term.exp.len(),
            });
        }
        let num = number_to_bigint(&term.num)?;
        let den = number_to_bigint(&term.den)?;
        if den.is_zero() || den.is_negative() {
            return Err(CalcError::Invalid("denominator must be positive".into()));
        }
        let c = BigRational::new(num, den);
        p = &p + &Poly::monomial(n_vars, &term.exp, c);
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonOpTerm {
    pub dexp: Vec<u32>,
    pub coeff: JsonPoly,
}

pub type JsonOp = Vec<JsonOpTerm>;

pub fn op_to_json(op: &PolyDiffOp) -> JsonOp {
    op.terms()
        .map(|(sigma, c)| JsonOpTerm {
            dexp: sigma.0.clone(),
            coeff: poly_to_json(c),
        })
        .collect()
}

pub fn op_from_json(j: &JsonOp, n_vars: usize) -> Result<PolyDiffOp, CalcError> {
    let mut op = PolyDiffOp::zero(n_vars);
    for term in j {
        if term.dexp.len() != n_vars {
            return Err(CalcError::RingMismatch {
                expected: n_vars,
                got: term.dexp.len(),
            });
        }
        let coeff = poly_from_json(&term.coeff, n_vars)?;
        let basis = PolyDiffOp::derivative(n_vars, &term.dexp);
        op = op.add(&basis.scale_poly(&coeff));
    }
    Ok(op)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonMatOp {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<JsonOp>>,
}

pub fn matop_to_json(m: &MatDiffOp) -> JsonMatOp {
    JsonMatOp {
        rows: m.rows,
        cols: m.cols,
        entries: (0..m.rows)
            .map(|r| (0..m.cols).map(|c| op_to_json(m.entry(r, c))).collect())
            .collect(),
    }
}

pub fn matop_from_json(j: &JsonMatOp, n_vars: usize) -> Result<MatDiffOp, CalcError> {
    if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
        return Err(CalcError::ShapeMismatch("matrix operator entries".into()));
    }
    let mut out = MatDiffOp::zero(n_vars, j.rows, j.cols);
    for r in 0..j.rows {
        for c in 0..j.cols {
            *out.entry_mut(r, c) = op_from_json(&j.entries[r][c], n_vars)?;
        }
    }
    Ok(out)
}

pub fn poly_matrix_to_json(m: &[Vec<Poly>]) -> Vec<Vec<JsonPoly>> {
    m.iter()
        .map(|row| row.iter().map(poly_to_json).collect())
        .collect()
}

pub fn poly_matrix_from_json(
    j: &[Vec<JsonPoly>],
    n_vars: usize,
) -> Result<Vec<Vec<Poly>>, CalcError> {
    j.iter()
        .map(|row| row.iter().map(|p| poly_from_json(p, n_vars)).collect())
        .collect()
}

pub fn poly_tensor3_to_json(t: &[Vec<Vec<Poly>>]) -> Vec<Vec<Vec<JsonPoly>>> {
    t.iter().map(|m| poly_matrix_to_json(m)).collect()
}

pub fn poly_tensor3_from_json(
    j: &[Vec<Vec<JsonPoly>>],
    n_vars: usize,
) -> Result<Vec<Vec<Vec<Poly>>>, CalcError> {
    j.iter().map(|m| poly_matrix_from_json(m, n_vars)).collect()
}

fn derivation_to_json(d: &ScalarDerivation) -> Vec<JsonPoly> {
    d.coeffs.iter().map(poly_to_json).collect()
}

fn derivation_from_json(j: &[JsonPoly], n_vars: usize) -> Result<ScalarDerivation, CalcError> {
    if j.len() != n_vars {
        return Err(CalcError::ShapeMismatch(
            "derivation coefficient count".into(),
        ));
    }
    Ok(ScalarDerivation::new(
        j.iter()
            .map(|p| poly_from_json(p, n_vars))
            .collect::<Result<_, _>>()?,
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonAlgebra {
    pub n: usize,
    #[serde(rename = "mP")]
    pub m_p: usize,
    #[serde(rename = "mQ")]
    pub m_q: usize,
    pub convention: Convention,
    pub g: Vec<Vec<Vec<JsonPoly>>>,
}

pub fn algebra_to_json(alg: &TrioleAlgebra) -> JsonAlgebra {
    JsonAlgebra {
        n: alg.n_vars,
        m_p: alg.m_p,
        m_q: alg.m_q,
        convention: alg.convention,
        g: poly_tensor3_to_json(&alg.g),
    }
}

pub fn algebra_from_json(j: &JsonAlgebra) -> Result<TrioleAlgebra, CalcError> {
    TrioleAlgebra::new(
        j.n,
        j.m_p,
        j.m_q,
        poly_tensor3_from_json(&j.g, j.n)?,
        j.convention,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonMorphism {
    pub psi1: Vec<Vec<JsonPoly>>,
    pub psi2: Vec<Vec<JsonPoly>>,
}

pub fn morphism_to_json(m: &TrioleMorphism) -> JsonMorphism {
    JsonMorphism {
        psi1: poly_matrix_to_json(&m.psi1),
        psi2: poly_matrix_to_json(&m.psi2),
    }
}

pub fn morphism_from_json(j: &JsonMorphism, n_vars: usize) -> Result<TrioleMorphism, CalcError> {
    Ok(TrioleMorphism {
        psi1: poly_matrix_from_json(&j.psi1, n_vars)?,
        psi2: poly_matrix_from_json(&j.psi2, n_vars)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonSubmodule {
    pub generators: Vec<Vec<JsonPoly>>,
}

pub fn submodule_to_json(s: &Submodule) -> JsonSubmodule {
    JsonSubmodule {
        generators: poly_matrix_to_json(&s.generators),
    }
}

pub fn submodule_from_json(j: &JsonSubmodule, n_vars: usize) -> Result<Submodule, CalcError> {
    Ok(Submodule {
        generators: poly_matrix_from_json(&j.generators, n_vars)?,
    })
}

/// `{"deg": d, components keyed by name}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonDerivation {
    pub deg: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xa: Option<Vec<JsonPoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xa1: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xp: Option<JsonMatOp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xa2: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<JsonPoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Vec<JsonPoly>>>,
}

pub fn graded_derivation_to_json(d: &GradedDerivation) -> JsonDerivation {
    let mut j = JsonDerivation {
        deg: d.degree(),
        xa: None,
        g: None,
        h: None,
        xa1: None,
        xp: None,
        xa2: None,
        phi: None,
        psi: None,
    };
    match d {
        GradedDerivation::Deg0 { x_a, g_mat, h_mat } => {
            j.xa = Some(derivation_to_json(x_a));
            j.g = Some(poly_matrix_to_json(g_mat));
            j.h = Some(poly_matrix_to_json(h_mat));
        }
        GradedDerivation::Deg1 { x_a1, xp } => {
            j.xa1 = Some(x_a1.iter().map(derivation_to_json).collect());
            j.xp = Some(matop_to_json(xp));
        }
        GradedDerivation::Deg2 { x_a2 } => {
            j.xa2 = Some(x_a2.iter().map(derivation_to_json).collect());
        }
        GradedDerivation::DegMinus1 { phi, psi } => {
            j.phi = Some(phi.iter().map(poly_to_json).collect());
            j.psi = Some(poly_matrix_to_json(psi));
        }
    }
    j
}

pub fn graded_derivation_from_json(
    j: &JsonDerivation,
    n_vars: usize,
) -> Result<GradedDerivation, CalcError> {
    let missing = |name: &str| CalcError::Invalid(format!("missing component {name}"));
    Ok(match j.deg {
        0 => GradedDerivation::Deg0 {
            x_a: derivation_from_json(j.xa.as_ref().ok_or_else(|| missing("xa"))?, n_vars)?,
            g_mat: poly_matrix_from_json(j.g.as_ref().ok_or_else(|| missing("g"))?, n_vars)?,
            h_mat: poly_matrix_from_json(j.h.as_ref().ok_or_else(|| missing("h"))?, n_vars)?,
        },
        1 => GradedDerivation::Deg1 {
            x_a1: j
                .xa1
                .as_ref()
                .ok_or_else(|| missing("xa1"))?
                .iter()
                .map(|d| derivation_from_json(d, n_vars))
                .collect::<Result<_, _>>()?,
            xp: matop_from_json(j.xp.as_ref().ok_or_else(|| missing("xp"))?, n_vars)?,
        },
        2 => GradedDerivation::Deg2 {
            x_a2: j
                .xa2
                .as_ref()
                .ok_or_else(|| missing("xa2"))?
                .iter()
                .map(|d| derivation_from_json(d, n_vars))
                .collect::<Result<_, _>>()?,
        },
        -1 => GradedDerivation::DegMinus1 {
            phi: j
                .phi
                .as_ref()
                .ok_or_else(|| missing("phi"))?
                .iter()
                .map(|p| poly_from_json(p, n_vars))
                .collect::<Result<_, _>>()?,
            psi: poly_matrix_from_json(j.psi.as_ref().ok_or_else(|| missing("psi"))?, n_vars)?,
        },
        d => return Err(CalcError::InadmissibleDegrees(d, 0)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonConnection {
    #[serde(rename = "Gamma")]
    pub gamma: Vec<Vec<Vec<JsonPoly>>>,
    #[serde(rename = "Upsilon")]
    pub upsilon: Vec<Vec<Vec<JsonPoly>>>,
}

pub fn connection_to_json(c: &TriConnection) -> JsonConnection {
    JsonConnection {
        gamma: poly_tensor3_to_json(&c.gamma),
        upsilon: poly_tensor3_to_json(&c.upsilon),
    }
}

pub fn connection_from_json(j: &JsonConnection, n_vars: usize) -> Result<TriConnection, CalcError> {
    Ok(TriConnection {
        gamma: poly_tensor3_from_json(&j.gamma, n_vars)?,
        upsilon: poly_tensor3_from_json(&j.upsilon, n_vars)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonDerData {
    pub symbol: Vec<JsonPoly>,
    pub mat: Vec<Vec<JsonPoly>>,
}

fn der_data_to_json(d: &DerData) -> JsonDerData {
    JsonDerData {
        symbol: derivation_to_json(&d.symbol),
        mat: poly_matrix_to_json(&d.mat),
    }
}

fn der_data_from_json(j: &JsonDerData, n_vars: usize) -> Result<DerData, CalcError> {
    Ok(DerData {
        symbol: derivation_from_json(&j.symbol, n_vars)?,
        mat: poly_matrix_from_json(&j.mat, n_vars)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonPpTerm {
    pub alpha: usize,
    pub beta: usize,
    pub d1: usize,
    pub d2: usize,
    pub coeff: Vec<JsonPoly>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonBiDerivation {
    pub deg: i64,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piAA")]
    pub pi_aa: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piAP")]
    pub pi_ap: Option<Vec<JsonDerData>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piAQ")]
    pub pi_aq: Option<Vec<JsonDerData>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piPP")]
    pub pi_pp: Option<Vec<JsonPpTerm>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piAA1")]
    pub pi_aa1: Option<Vec<Vec<Vec<JsonPoly>>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piAP1")]
    pub pi_ap1: Option<Vec<JsonDerGpq>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "piQ")]
    pub pi_q: Option<Vec<Vec<Vec<JsonPoly>>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "bracketP")]
    pub bracket_p: Option<Vec<Vec<Vec<JsonPoly>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<Vec<JsonPoly>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "pOnQ")]
    pub p_on_q: Option<Vec<JsonDerData>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "fMap")]
    pub f_map: Option<Vec<Vec<Vec<JsonPoly>>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "bracketQ")]
    pub bracket_q: Option<Vec<Vec<Vec<JsonPoly>>>>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "anchorQ")]
    pub anchor_q: Option<Vec<Vec<JsonPoly>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonDerGpq {
    pub twist: Vec<Vec<JsonPoly>>,
    pub mat: Vec<Vec<JsonPoly>>,
}

pub fn biderivation_to_json(pi: &BiDerivation) -> JsonBiDerivation {
    let mut j = JsonBiDerivation {
        deg: pi.degree(),
        pi_aa: None,
        pi_ap: None,
        pi_aq: None,
        pi_pp: None,
        pi_aa1: None,
        pi_ap1: None,
        pi_q: None,
        bracket_p: None,
        anchor: None,
        p_on_q: None,
        f_map: None,
        bracket_q: None,
        anchor_q: None,
    };
    match pi {
        BiDerivation::Deg0 {
            pi_aa,
            pi_ap,
            pi_aq,
            pi_pp,
        } => {
            j.pi_aa = Some(poly_matrix_to_json(pi_aa));
            j.pi_ap = Some(pi_ap.iter().map(der_data_to_json).collect());
            j.pi_aq = Some(pi_aq.iter().map(der_data_to_json).collect());
            let mut terms = Vec::new();
            for al in 0..pi_pp.m_p {
                for be in 0..pi_pp.m_p {
                    for (&(d1, d2), coeff) in &pi_pp.terms[al][be] {
                        terms.push(JsonPpTerm {
                            alpha: al + 1,
                            beta: be + 1,
                            d1,
                            d2,
                            coeff: coeff.iter().map(poly_to_json).collect(),
                        });
                    }
                }
            }
            j.pi_pp = Some(terms);
        }
        BiDerivation::Deg1 { pi_aa1, pi_ap1 } => {
            j.pi_aa1 = Some(poly_tensor3_to_json(pi_aa1));
            j.pi_ap1 = Some(
                pi_ap1
                    .iter()
                    .map(|d| JsonDerGpq {
                        twist: d.twist.iter().map(derivation_to_json).collect(),
                        mat: poly_matrix_to_json(&d.mat),
                    })
                    .collect(),
            );
        }
        BiDerivation::Deg2 { pi_q } => {
            j.pi_q = Some(poly_tensor3_to_json(pi_q));
        }
        BiDerivation::DegMinus1 {
            bracket_p,
            anchor,
            p_on_q,
            f_map,
        } => {
            j.bracket_p = Some(poly_tensor3_to_json(bracket_p));
            j.anchor = Some(anchor.iter().map(derivation_to_json).collect());
            j.p_on_q = Some(p_on_q.iter().map(der_data_to_json).collect());
            j.f_map = Some(
                f_map
                    .iter()
                    .map(|row| row.iter().map(derivation_to_json).collect())
                    .collect(),
            );
        }
        BiDerivation::DegMinus2 {
            bracket_q,
            anchor_q,
        } => {
            j.bracket_q = Some(poly_tensor3_to_json(bracket_q));
            j.anchor_q = Some(anchor_q.iter().map(derivation_to_json).collect());
        }
    }
    j
}

pub fn biderivation_from_json(
    j: &JsonBiDerivation,
    alg: &TrioleAlgebra,
) -> Result<BiDerivation, CalcError> {
    let n = alg.n_vars;
    let missing = |name: &str| CalcError::Invalid(format!("missing component {name}"));
    Ok(match j.deg {
        0 => {
            let pi_pp_terms = j.pi_pp.as_ref().ok_or_else(|| missing("piPP"))?;
            let mut pi_pp = PpComponent::zero(alg.m_p, alg.m_q);
            for t in pi_pp_terms {
                if t.alpha == 0 || t.beta == 0 || t.alpha > alg.m_p || t.beta > alg.m_p {
                    return Err(CalcError::Invalid("PP term index out of range".into()));
                }
                let coeff: Vec<Poly> = t
                    .coeff
                    .iter()
                    .map(|p| poly_from_json(p, n))
                    .collect::<Result<_, _>>()?;
                pi_pp.add_term(t.alpha - 1, t.beta - 1, t.d1, t.d2, coeff);
            }
            BiDerivation::Deg0 {
                pi_aa: poly_matrix_from_json(j.pi_aa.as_ref().ok_or_else(|| missing("piAA"))?, n)?,
                pi_ap: j
                    .pi_ap
                    .as_ref()
                    .ok_or_else(|| missing("piAP"))?
                    .iter()
                    .map(|d| der_data_from_json(d, n))
                    .collect::<Result<_, _>>()?,
                pi_aq: j
                    .pi_aq
                    .as_ref()
                    .ok_or_else(|| missing("piAQ"))?
                    .iter()
                    .map(|d| der_data_from_json(d, n))
                    .collect::<Result<_, _>>()?,
                pi_pp,
            }
        }
        1 => BiDerivation::Deg1 {
            pi_aa1: poly_tensor3_from_json(j.pi_aa1.as_ref().ok_or_else(|| missing("piAA1"))?, n)?,
            pi_ap1: j
                .pi_ap1
                .as_ref()
                .ok_or_else(|| missing("piAP1"))?
                .iter()
                .map(|d| {
                    Ok(DerGpq {
                        twist: d
                            .twist
                            .iter()
                            .map(|t| derivation_from_json(t, n))
                            .collect::<Result<_, CalcError>>()?,
                        mat: poly_matrix_from_json(&d.mat, n)?,
                    })
                })
                .collect::<Result<_, CalcError>>()?,
        },
        2 => BiDerivation::Deg2 {
            pi_q: poly_tensor3_from_json(j.pi_q.as_ref().ok_or_else(|| missing("piQ"))?, n)?,
        },
        -1 => BiDerivation::DegMinus1 {
            bracket_p: poly_tensor3_from_json(
                j.bracket_p.as_ref().ok_or_else(|| missing("bracketP"))?,
                n,
            )?,
            anchor: j
                .anchor
                .as_ref()
                .ok_or_else(|| missing("anchor"))?
                .iter()
                .map(|d| derivation_from_json(d, n))
                .collect::<Result<_, _>>()?,
            p_on_q: j
                .p_on_q
                .as_ref()
                .ok_or_else(|| missing("pOnQ"))?
                .iter()
                .map(|d| der_data_from_json(d, n))
                .collect::<Result<_, _>>()?,
            f_map: j
                .f_map
                .as_ref()
                .ok_or_else(|| missing("fMap"))?
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|d| derivation_from_json(d, n))
                        .collect::<Result<_, CalcError>>()
                })
                .collect::<Result<_, CalcError>>()?,
        },
        -2 => BiDerivation::DegMinus2 {
            bracket_q: poly_tensor3_from_json(
                j.bracket_q.as_ref().ok_or_else(|| missing("bracketQ"))?,
                n,
            )?,
            anchor_q: j
                .anchor_q
                .as_ref()
                .ok_or_else(|| missing("anchorQ"))?
                .iter()
                .map(|d| derivation_from_json(d, n))
                .collect::<Result<_, _>>()?,
        },
        d => return Err(crate::biderivation::reject_uncharacterized_degree(d)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonModule {
    pub r0: usize,
    pub r1: usize,
    pub r2: usize,
    pub lambda0: Vec<Vec<Vec<JsonPoly>>>,
    pub lambda1: Vec<Vec<Vec<JsonPoly>>>,
    pub nu: Vec<Vec<Vec<JsonPoly>>>,
}

pub fn module_to_json(r: &TruncatedTriModule) -> JsonModule {
    JsonModule {
        r0: r.r0,
        r1: r.r1,
        r2: r.r2,
        lambda0: poly_tensor3_to_json(&r.lambda0),
        lambda1: poly_tensor3_to_json(&r.lambda1),
        nu: poly_tensor3_to_json(&r.nu),
    }
}

pub fn module_from_json(j: &JsonModule, n_vars: usize) -> Result<TruncatedTriModule, CalcError> {
    Ok(TruncatedTriModule {
        r0: j.r0,
        r1: j.r1,
        r2: j.r2,
        lambda0: poly_tensor3_from_json(&j.lambda0, n_vars)?,
        lambda1: poly_tensor3_from_json(&j.lambda1, n_vars)?,
        nu: poly_tensor3_from_json(&j.nu, n_vars)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonTriDiffOp {
    pub deg: i64,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<JsonOp>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "aMat")]
    pub a_mat: Option<JsonMatOp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<JsonMatOp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<JsonMatOp>,
}

pub fn tridiffop_to_json(op: &TriDiffOp) -> JsonTriDiffOp {
    let mut j = JsonTriDiffOp {
        deg: op.degree(),
        order: op.order(),
        a: None,
        a_mat: None,
        p: None,
        q: None,
    };
    match op {
        TriDiffOp::Deg0 { a, p, q } => {
            j.a = Some(op_to_json(a));
            j.p = Some(matop_to_json(p));
            j.q = Some(matop_to_json(q));
        }
        TriDiffOp::Deg1 { a, p } => {
            j.a_mat = Some(matop_to_json(a));
            j.p = Some(matop_to_json(p));
        }
        TriDiffOp::Deg2 { a } => {
            j.a_mat = Some(matop_to_json(a));
        }
    }
    j
}

pub fn tridiffop_from_json(j: &JsonTriDiffOp, n_vars: usize) -> Result<TriDiffOp, CalcError> {
    let missing = |name: &str| CalcError::Invalid(format!("missing component {name}"));
    Ok(match j.deg {
        0 => TriDiffOp::Deg0 {
            a: op_from_json(j.a.as_ref().ok_or_else(|| missing("a"))?, n_vars)?,
            p: matop_from_json(j.p.as_ref().ok_or_else(|| missing("p"))?, n_vars)?,
            q: matop_from_json(j.q.as_ref().ok_or_else(|| missing("q"))?, n_vars)?,
        },
        1 => TriDiffOp::Deg1 {
            a: matop_from_json(j.a_mat.as_ref().ok_or_else(|| missing("aMat"))?, n_vars)?,
            p: matop_from_json(j.p.as_ref().ok_or_else(|| missing("p"))?, n_vars)?,
        },
        2 => TriDiffOp::Deg2 {
            a: matop_from_json(j.a_mat.as_ref().ok_or_else(|| missing("aMat"))?, n_vars)?,
        },
        d => return Err(CalcError::InadmissibleDegrees(d, 0)),
    })
}

/// Symbols serialize as ξ-polynomials (2n variables) with shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonSymbol {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub body: Vec<Vec<JsonPoly>>,
}

pub fn symbol_to_json(s: &SymbolTensor) -> JsonSymbol {
    let (rows, cols) = s.shape();
    JsonSymbol {
        k: s.degree(),
        rows,
        cols,
        body: (0..rows)
            .map(|r| (0..cols).map(|c| poly_to_json(s.entry(r, c))).collect())
            .collect(),
    }
}

pub fn symbol_from_json(j: &JsonSymbol, n_vars: usize) -> Result<SymbolTensor, CalcError> {
    let mut body = Vec::with_capacity(j.rows * j.cols);
    for row in &j.body {
        for p in row {
            body.push(poly_from_json(p, 2 * n_vars)?);
        }
    }
    SymbolTensor::matrix(n_vars, j.k, j.rows, j.cols, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn poly_round_trip_canonical() {
        let p = &(&x(2, 0) * &x(2, 0)).scale(&BigRational::new(BigInt::from(3), BigInt::from(4)))
            + &x(2, 1).scale_int(-7);
        let j = poly_to_json(&p);
        let s = serde_json::to_string(&j).unwrap();
        let parsed: JsonPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(poly_from_json(&parsed, 2).unwrap(), p);
        // emit ∘ parse is byte-identical on canonical strings
        let s2 =
            serde_json::to_string(&poly_to_json(&poly_from_json(&parsed, 2).unwrap())).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn op_round_trip() {
        let op = PolyDiffOp::derivative(2, &[1, 1])
            .scale_poly(&x(2, 0))
            .add(&PolyDiffOp::partial(2, 1));
        let j = op_to_json(&op);
        assert_eq!(op_from_json(&j, 2).unwrap(), op);
    }

    #[test]
    fn algebra_round_trip() {
        let alg = TrioleAlgebra::diagonal_metric(2, vec![Poly::one(2), x(2, 0)]);
        let j = algebra_to_json(&alg);
        let s = serde_json::to_string(&j).unwrap();
        let back: JsonAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(algebra_from_json(&back).unwrap(), alg);
    }

    #[test]
    fn derivation_round_trip() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let d = GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::partial(2, 0), ScalarDerivation::zero(2)],
            vec![vec![x(2, 1), Poly::one(2)]],
        );
        let j = graded_derivation_to_json(&d);
        assert_eq!(graded_derivation_from_json(&j, 2).unwrap(), d);
    }

    #[test]
    fn biderivation_round_trip() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let mut pi = vec![vec![Poly::zero(2); 2]; 2];
        pi[0][1] = Poly::one(2);
        pi[1][0] = Poly::from_int(2, -1);
        let b = BiDerivation::symplectic_lift(&alg, &pi);
        let j = biderivation_to_json(&b);
        let s = serde_json::to_string(&j).unwrap();
        let back: JsonBiDerivation = serde_json::from_str(&s).unwrap();
        let b2 = biderivation_from_json(&back, &alg).unwrap();
        let j2 = biderivation_to_json(&b2);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            serde_json::to_string(&j2).unwrap()
        );
    }

    #[test]
    fn rejects_bad_denominator() {
        let j = vec![JsonTerm {
            exp: vec![0, 0],
            num: serde_json::Number::from_str("1").unwrap(),
            den: serde_json::Number::from_str("0").unwrap(),
        }];
        assert!(poly_from_json(&j, 2).is_err());
    }
}
