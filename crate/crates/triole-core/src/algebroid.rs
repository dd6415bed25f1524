//! Lie algebroids extracted from degree −1 and −2 triolic Poisson
//! brackets: bracket/anchor validation and the Der-pair compatibility
//! with the metric.

use crate::algebra::TrioleAlgebra;
#[cfg(test)]
use crate::biderivation::eval_bracket;
use crate::biderivation::{algebroid_bracket, BiDerivation, Homog};
use crate::derivation::{validate_derivation, GradedDerivation};
use crate::poly::{monomials_up_to, Poly, ScalarDerivation};
use crate::report::{ValidationReport, Witness};
use crate::CalcError;
use num::BigRational;

/// A Lie algebroid on a free module: structure functions over A and an
/// anchor into D(A).
#[derive(Debug, Clone)]
pub struct LieAlgebroid {
    pub rank: usize,
    /// structure[a][b][c]: the c-component of [e_a, e_b].
    pub structure: Vec<Vec<Vec<Poly>>>,
    pub anchor: Vec<ScalarDerivation>,
}

impl LieAlgebroid {
    pub fn bracket(&self, v1: &[Poly], v2: &[Poly], n: usize) -> Vec<Poly> {
        algebroid_bracket(&self.structure, &self.anchor, v1, v2, n)
    }

    pub fn anchor_of(&self, v: &[Poly]) -> ScalarDerivation {
        let n = self.anchor[0].n_vars();
        let mut acc = ScalarDerivation::zero(n);
        for (a, f) in v.iter().enumerate() {
            acc = acc.add(&self.anchor[a].scale(f));
        }
        acc
    }
}

fn mons(n: usize, d: u32) -> Vec<Poly> {
    monomials_up_to(n, d)
        .into_iter()
        .map(|m| Poly::monomial(n, &m.0, BigRational::from_integer(1.into())))
        .collect()
}

/// Antisymmetry, Jacobi (on sections with monomial coefficients) and
/// the anchor-morphism identity, all exact.
pub fn validate_algebroid(l: &LieAlgebroid, n_vars: usize) -> ValidationReport {
    let rank = l.rank;
    for a in 0..rank {
        for b in 0..rank {
            for c in 0..rank {
                if l.structure[a][b][c] != -&l.structure[b][a][c] {
                    return ValidationReport::fail(Witness::new(
                        "bracket antisymmetry",
                        vec![a + 1, b + 1, c + 1],
                    ));
                }
            }
        }
    }
    let coeffs = mons(n_vars, 2);
    let sections: Vec<Vec<Poly>> = coeffs
        .iter()
        .flat_map(|m| {
            (0..rank).map(move |a| {
                let mut v = vec![Poly::zero(n_vars); rank];
                v[a] = m.clone();
                v
            })
        })
        .collect();
    // anchor morphism: α([p₁,p₂]) = [α(p₁), α(p₂)]
    for (i, v1) in sections.iter().enumerate() {
        for (j, v2) in sections.iter().enumerate() {
            let lhs = l.anchor_of(&l.bracket(v1, v2, n_vars));
            let rhs = l.anchor_of(v1).commutator(&l.anchor_of(v2));
            if lhs != rhs {
                return ValidationReport::fail(Witness::new(
                    "anchor is a bracket morphism",
                    vec![i + 1, j + 1],
                ));
            }
        }
    }
    // Jacobi on monomial-coefficient triples (basis sections suffice for
    // the structure identity; coefficients cover the anchor derivatives)
    for (i, v1) in sections.iter().enumerate() {
        for (j, v2) in sections.iter().enumerate() {
            for (k, v3) in sections.iter().enumerate() {
                let t1 = l.bracket(v1, &l.bracket(v2, v3, n_vars), n_vars);
                let t2 = l.bracket(v2, &l.bracket(v3, v1, n_vars), n_vars);
                let t3 = l.bracket(v3, &l.bracket(v1, v2, n_vars), n_vars);
                let all_zero = (0..rank).all(|c| (&(&t1[c] + &t2[c]) + &t3[c]).is_zero());
                if !all_zero {
                    return ValidationReport::fail(Witness::new(
                        "Jacobi identity",
                        vec![i + 1, j + 1, k + 1],
                    ));
                }
            }
        }
    }
    ValidationReport::ok()
}

/// Outcome of the degree −1 extraction: the algebroid on P, the
/// Der-pairs Z_α = ({e_α,−}|_P, {e_α,−}|_Q), and the Jacobi(p,a,q)
/// compatibility residual.
#[derive(Debug, Clone)]
pub struct DegMinus1Extraction {
    pub algebroid: LieAlgebroid,
    pub algebroid_report: ValidationReport,
    /// Z-pairs realized as degree-0 derivations (one per P-basis index);
    /// validity is exactly the g-compatibility of the bracket.
    pub z_pairs: Vec<GradedDerivation>,
    pub z_report: ValidationReport,
    pub compat_eq_residual_zero: bool,
    pub report: ValidationReport,
}

/// Extract and validate the Lie algebroid of a degree −1 bracket, the
/// Der-pair Z, and the f-compatibility identity.
pub fn algebroid_from_deg_minus1(
    pi: &BiDerivation,
    alg: &TrioleAlgebra,
) -> Result<DegMinus1Extraction, CalcError> {
    let BiDerivation::DegMinus1 {
        bracket_p,
        anchor,
        p_on_q,
        ..
    } = pi
    else {
        return Err(CalcError::Invalid(
            "expected a degree −1 bi-derivation".into(),
        ));
    };
    let n = alg.n_vars;
    let algebroid = LieAlgebroid {
        rank: alg.m_p,
        structure: bracket_p.clone(),
        anchor: anchor.clone(),
    };
    let algebroid_report = validate_algebroid(&algebroid, n);
    // Z_α = (anchor[α] + [e_α,−]-matrix on P, anchor[α] + W_α on Q):
    // validity as a degree-0 derivation is the g-compatibility of the
    // bracket, i.e. {p,−}|_Q g(p₁,p₂) = g([p,p₁],p₂) + g(p₁,[p,p₂]).
    let mut z_pairs = Vec::with_capacity(alg.m_p);
    let mut z_report = ValidationReport::ok();
    for al in 0..alg.m_p {
        let g_mat: Vec<Vec<Poly>> = (0..alg.m_p)
            .map(|ga| {
                (0..alg.m_p)
                    .map(|be| bracket_p[al][be][ga].clone())
                    .collect()
            })
            .collect();
        let z = GradedDerivation::Deg0 {
            x_a: anchor[al].clone(),
            g_mat,
            h_mat: p_on_q[al].mat.clone(),
        };
        let rep = validate_derivation(&z, alg);
        if !rep.valid && z_report.valid {
            z_report = ValidationReport::fail(Witness::new(
                "Z-pair g-compatibility (Der(g;P,Q) membership)",
                vec![al + 1],
            ));
        }
        z_pairs.push(z);
    }
    // Jacobi(p, a, q) compatibility, evaluated through the Jacobiator
    let mut compat = true;
    let mut witness = None;
    'outer: for al in 0..alg.m_p {
        for aq in 0..alg.m_q {
            for a in mons(n, 2) {
                let p = Homog::P(alg.p_basis(al));
                let q = Homog::Q(alg.q_basis(aq));
                let t_a = Homog::A(a.clone());
                if let Some(res) = crate::biderivation::jacobiator(pi, &p, &t_a, &q, alg) {
                    if !res.is_zero() {
                        compat = false;
                        witness = Some(Witness::new(
                            "f-compatibility Jac(p,a,q)",
                            vec![al + 1, aq + 1],
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    let valid = algebroid_report.valid && z_report.valid && compat;
    let report = if valid {
        ValidationReport::ok()
    } else {
        ValidationReport {
            valid: false,
            witness: algebroid_report
                .witness
                .clone()
                .or(z_report.witness.clone())
                .or(witness),
        }
    };
    Ok(DegMinus1Extraction {
        algebroid,
        algebroid_report,
        z_pairs,
        z_report,
        compat_eq_residual_zero: compat,
        report,
    })
}

/// Extract and validate the Lie algebroid on Q of a degree −2 bracket.
pub fn algebroid_from_deg_minus2(
    pi: &BiDerivation,
    alg: &TrioleAlgebra,
) -> Result<(LieAlgebroid, ValidationReport), CalcError> {
    let BiDerivation::DegMinus2 {
        bracket_q,
        anchor_q,
    } = pi
    else {
        return Err(CalcError::Invalid(
            "expected a degree −2 bi-derivation".into(),
        ));
    };
    let algebroid = LieAlgebroid {
        rank: alg.m_q,
        structure: bracket_q.clone(),
        anchor: anchor_q.clone(),
    };
    let report = validate_algebroid(&algebroid, alg.n_vars);
    Ok((algebroid, report))
}

/// The tangent-algebroid degree −1 instance over a constant metric:
/// P of rank n with the identity anchor, zero structure functions,
/// f = 0 and `{e_α,−}|_Q = ∂_α`.
pub fn tangent_degm1_instance(alg: &TrioleAlgebra) -> BiDerivation {
    let n = alg.n_vars;
    assert_eq!(alg.m_p, n, "tangent instance needs m_P = n");
    BiDerivation::DegMinus1 {
        bracket_p: vec![vec![vec![Poly::zero(n); n]; n]; n],
        anchor: (0..n).map(|i| ScalarDerivation::partial(n, i)).collect(),
        p_on_q: (0..n)
            .map(|i| crate::biderivation::DerData {
                symbol: ScalarDerivation::partial(n, i),
                mat: vec![vec![Poly::zero(n); alg.m_q]; alg.m_q],
            })
            .collect(),
        f_map: vec![vec![ScalarDerivation::zero(n); alg.m_p]; alg.m_q],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biderivation::{schouten_square, validate_biderivation, DerData};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn tangent_algebroid_extraction() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let pi = tangent_degm1_instance(&alg);
        assert!(validate_biderivation(&pi, &alg).valid);
        let ext = algebroid_from_deg_minus1(&pi, &alg).unwrap();
        assert!(ext.report.valid);
        assert!(ext.algebroid_report.valid);
        assert!(ext.z_report.valid);
        assert!(ext.compat_eq_residual_zero);
        // the extracted bracket is the vector-field commutator
        let v1 = vec![x(2, 0), Poly::zero(2)];
        let v2 = vec![Poly::zero(2), x(2, 0)];
        let br = ext.algebroid.bracket(&v1, &v2, 2);
        // [x₁∂₁, x₁∂₂] = x₁∂₂
        assert_eq!(br, vec![Poly::zero(2), x(2, 0)]);
        assert!(schouten_square(&pi, &alg).zero);
    }

    #[test]
    fn zero_brackets_are_abelian_algebroid() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let n = 2;
        let pi = BiDerivation::DegMinus1 {
            bracket_p: vec![vec![vec![Poly::zero(n); 2]; 2]; 2],
            anchor: vec![ScalarDerivation::zero(n); 2],
            p_on_q: vec![DerData::zero(n, 1); 2],
            f_map: vec![vec![ScalarDerivation::zero(n); 2]],
        };
        let ext = algebroid_from_deg_minus1(&pi, &alg).unwrap();
        assert!(ext.report.valid);
    }

    #[test]
    fn broken_jacobi_witnessed() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let n = 2;
        let mut pi = tangent_degm1_instance(&alg);
        if let BiDerivation::DegMinus1 { bracket_p, .. } = &mut pi {
            // [e₁,e₂] = x₁e₁ with identity anchors breaks Jacobi/morphism
            bracket_p[0][1][0] = x(n, 0);
            bracket_p[1][0][0] = -&x(n, 0);
        }
        let ext = algebroid_from_deg_minus1(&pi, &alg).unwrap();
        assert!(!ext.algebroid_report.valid);
    }

    #[test]
    fn rank1_deg_minus2_algebroid() {
        // [q₁ε, q₂ε] = (q₁X(q₂) − q₂X(q₁))ε with α(qε) = qX, X = ∂₁
        let alg = TrioleAlgebra::identity_metric(2, 1);
        let n = 2;
        let pi = BiDerivation::DegMinus2 {
            bracket_q: vec![vec![vec![Poly::zero(n)]]],
            anchor_q: vec![ScalarDerivation::partial(n, 0)],
        };
        assert!(validate_biderivation(&pi, &alg).valid);
        let (l, rep) = algebroid_from_deg_minus2(&pi, &alg).unwrap();
        assert!(rep.valid);
        // extended bracket reproduces q₁X(q₂) − q₂X(q₁)
        let q1 = vec![x(n, 0)];
        let q2 = vec![&x(n, 0) * &x(n, 1)];
        let br = l.bracket(&q1, &q2, n);
        let expect = &(&q1[0] * &q2[0].partial_derivative(0).unwrap())
            - &(&q2[0] * &q1[0].partial_derivative(0).unwrap());
        assert_eq!(br[0], expect);
        assert!(schouten_square(&pi, &alg).zero);
    }

    #[test]
    fn deg_minus2_zero_bracket_abelian() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let pi = BiDerivation::DegMinus2 {
            bracket_q: vec![vec![vec![Poly::zero(2)]]],
            anchor_q: vec![ScalarDerivation::zero(2)],
        };
        let (_, rep) = algebroid_from_deg_minus2(&pi, &alg).unwrap();
        assert!(rep.valid);
    }

    #[test]
    fn deg_minus2_broken_anchor_witnessed() {
        // anchor not a morphism: α(ε) = ∂₁ with [ε,ε]... rank 2 needed
        let n = 2;
        let g = vec![
            vec![
                vec![Poly::one(n), Poly::zero(n)],
                vec![Poly::zero(n), Poly::one(n)],
            ],
            vec![vec![Poly::zero(n); 2]; 2],
        ];
        let alg = TrioleAlgebra::new(n, 2, 2, g, crate::algebra::Convention::Plain).unwrap();
        let mut bracket_q = vec![vec![vec![Poly::zero(n); 2]; 2]; 2];
        // [ε₁,ε₂] = ε₁ but anchors commute and α(ε₁) ≠ 0: morphism fails
        bracket_q[0][1][0] = Poly::one(n);
        bracket_q[1][0][0] = Poly::from_int(n, -1);
        let pi = BiDerivation::DegMinus2 {
            bracket_q,
            anchor_q: vec![
                ScalarDerivation::partial(n, 0),
                ScalarDerivation::partial(n, 1),
            ],
        };
        let (_, rep) = algebroid_from_deg_minus2(&pi, &alg).unwrap();
        assert!(!rep.valid);
    }

    #[test]
    fn eval_bracket_restriction_eq23() {
        // {p,−}|_Q g(p₁,p₂) = g([p,p₁],p₂) + g(p₁,[p,p₂]) on basis triples
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let pi = tangent_degm1_instance(&alg);
        let BiDerivation::DegMinus1 {
            bracket_p,
            anchor,
            p_on_q,
            ..
        } = &pi
        else {
            panic!()
        };
        for al in 0..2 {
            for be in 0..2 {
                for ga in 0..2 {
                    let p = alg.p_basis(al);
                    let p1 = alg.p_basis(be);
                    let p2 = alg.p_basis(ga);
                    let gval = alg.metric_apply(&p1, &p2);
                    let lhs = p_on_q[al].apply(&gval);
                    let b1 = algebroid_bracket(bracket_p, anchor, &p, &p1, 2);
                    let b2 = algebroid_bracket(bracket_p, anchor, &p, &p2, 2);
                    let rhs: Vec<Poly> = alg
                        .metric_apply(&b1, &p2)
                        .iter()
                        .zip(&alg.metric_apply(&p1, &b2))
                        .map(|(u, v)| u + v)
                        .collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let _ = eval_bracket(&pi, &Homog::A(Poly::one(2)), &Homog::A(Poly::one(2)), &alg);
    }
}
