//! Bi-derivations `D₂(𝒯)_g`, the Schouten square (graded Jacobiator)
//! and the degree-0 triolic Poisson system.
//!
//! Components are stored as per-slot bounded-order multidifferential
//! data; identities are checked on monomial bases of degree ≤ 2 per
//! slot, the total order bound of the Jacobiator. Odd-slot signs are
//! keyed to the algebra convention: with a symmetric (plain) metric the
//! PP slot is antisymmetric, with an alternating (koszul) metric it is
//! symmetric; the validation report records which.

use crate::algebra::{Convention, TrioleAlgebra};
use crate::derivation::{validate_derivation, GradedDerivation};
use crate::poly::{monomials_up_to, Poly, ScalarDerivation};
use crate::report::{ValidationReport, Witness};
use crate::CalcError;
use num::BigRational;
use serde::Serialize;
use std::collections::BTreeMap;

/// Der-operator data on a free module: symbol + matrix part.
#[derive(Debug, Clone, PartialEq)]
pub struct DerData {
    pub symbol: ScalarDerivation,
    pub mat: Vec<Vec<Poly>>,
}

impl DerData {
    pub fn zero(n: usize, size: usize) -> Self {
        DerData {
            symbol: ScalarDerivation::zero(n),
            mat: vec![vec![Poly::zero(n); size]; size],
        }
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        (0..self.mat.len())
            .map(|r| {
                let mut acc = self.symbol.apply(&v[r]);
                for c in 0..v.len() {
                    acc = &acc + &(&self.mat[r][c] * &v[c]);
                }
                acc
            })
            .collect()
    }
}

/// Element of Der^g(P,Q): `□(f e_α) = g(X(f), e_α) + f·h_α` with a
/// P-valued twist X.
#[derive(Debug, Clone, PartialEq)]
pub struct DerGpq {
    pub twist: Vec<ScalarDerivation>,
    /// m_Q × m_P matrix part.
    pub mat: Vec<Vec<Poly>>,
}

impl DerGpq {
    pub fn apply(&self, p: &[Poly], alg: &TrioleAlgebra) -> Vec<Poly> {
        let n = alg.n_vars;
        let mut out = vec![Poly::zero(n); alg.m_q];
        for (be, f) in p.iter().enumerate() {
            // g(X(f), e_be) + f·h_be
            let xf: Vec<Poly> = self.twist.iter().map(|d| d.apply(f)).collect();
            let e = alg.p_basis(be);
            let tw = alg.metric_apply(&xf, &e);
            for b in 0..alg.m_q {
                out[b] = &out[b] + &(&tw[b] + &(&self.mat[b][be] * f));
            }
        }
        out
    }
}

/// (d₁, d₂) → Q-vector coefficient table of one (α, β) slot pair.
pub type PpTermTable = BTreeMap<(usize, usize), Vec<Poly>>;

/// Bilinear first-order-per-slot operator P×P → Q. Term key: derivative
/// slot index per argument, 0 = identity and i = ∂ᵢ.
#[derive(Debug, Clone, PartialEq)]
pub struct PpComponent {
    pub m_p: usize,
    pub m_q: usize,
    /// terms[α][β]: (d₁, d₂) → Q-vector coefficient
    pub terms: Vec<Vec<PpTermTable>>,
}

impl PpComponent {
    pub fn zero(m_p: usize, m_q: usize) -> Self {
        PpComponent {
            m_p,
            m_q,
            terms: vec![vec![BTreeMap::new(); m_p]; m_p],
        }
    }

    pub fn add_term(&mut self, al: usize, be: usize, d1: usize, d2: usize, coeff: Vec<Poly>) {
        let n = coeff[0].n_vars();
        let entry = self.terms[al][be]
            .entry((d1, d2))
            .or_insert_with(|| vec![Poly::zero(n); self.m_q]);
        for (e, c) in entry.iter_mut().zip(&coeff) {
            *e = &*e + c;
        }
    }

    fn slot_apply(f: &Poly, d: usize) -> Poly {
        if d == 0 {
            f.clone()
        } else {
            f.partial_derivative(d - 1).unwrap()
        }
    }

    pub fn apply(&self, p1: &[Poly], p2: &[Poly], n: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(n); self.m_q];
        for (al, f) in p1.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (be, h) in p2.iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                for (&(d1, d2), coeff) in &self.terms[al][be] {
                    let w = &Self::slot_apply(f, d1) * &Self::slot_apply(h, d2);
                    if w.is_zero() {
                        continue;
                    }
                    for (o, c) in out.iter_mut().zip(coeff) {
                        *o = &*o + &(c * &w);
                    }
                }
            }
        }
        out
    }
}

/// Degree-tagged bi-derivation component bundles.
#[derive(Debug, Clone)]
pub enum BiDerivation {
    Deg0 {
        /// π^{ij}, antisymmetric.
        pi_aa: Vec<Vec<Poly>>,
        /// per ∂ᵢ-slot: Der-operator on P.
        pi_ap: Vec<DerData>,
        /// per ∂ᵢ-slot: Der-operator on Q.
        pi_aq: Vec<DerData>,
        pi_pp: PpComponent,
    },
    Deg1 {
        /// π₁[i][j]: P-vector, antisymmetric in (i,j).
        pi_aa1: Vec<Vec<Vec<Poly>>>,
        /// per ∂ᵢ-slot: element of Der^g(P,Q).
        pi_ap1: Vec<DerGpq>,
    },
    Deg2 {
        /// Q-valued bivector, antisymmetric in (i,j).
        pi_q: Vec<Vec<Vec<Poly>>>,
    },
    DegMinus1 {
        /// structure functions [e_α,e_β]_P = Σ c[α][β][γ] e_γ.
        bracket_p: Vec<Vec<Vec<Poly>>>,
        /// anchor α(e_α) ∈ D(A).
        anchor: Vec<ScalarDerivation>,
        /// {e_α, −}|_Q: Der-data on Q whose symbol must be anchor[α].
        p_on_q: Vec<DerData>,
        /// f(ε_A) ∈ D(A,P): f_map[A][γ] is the e_γ coefficient derivation.
        f_map: Vec<Vec<ScalarDerivation>>,
    },
    DegMinus2 {
        /// structure functions [ε_A, ε_B]_Q = Σ c[A][B][C] ε_C.
        bracket_q: Vec<Vec<Vec<Poly>>>,
        anchor_q: Vec<ScalarDerivation>,
    },
}

impl BiDerivation {
    pub fn degree(&self) -> i64 {
        match self {
            BiDerivation::Deg0 { .. } => 0,
            BiDerivation::Deg1 { .. } => 1,
            BiDerivation::Deg2 { .. } => 2,
            BiDerivation::DegMinus1 { .. } => -1,
            BiDerivation::DegMinus2 { .. } => -2,
        }
    }

    /// The Hamiltonian-lift Poisson structure for a constant
    /// antisymmetric bivector π over a constant metric: AP and AQ act
    /// by the scalar lift of the Hamiltonian fields, and the PP slot is
    /// `Π(f e_α, h e_β) = X_h(f)·g(e_α,e_β)`.
    pub fn symplectic_lift(alg: &TrioleAlgebra, pi: &[Vec<Poly>]) -> Self {
        let n = alg.n_vars;
        let lift = |i: usize| ScalarDerivation::new((0..n).map(|j| pi[i][j].clone()).collect());
        let pi_ap = (0..n)
            .map(|i| DerData {
                symbol: lift(i),
                mat: vec![vec![Poly::zero(n); alg.m_p]; alg.m_p],
            })
            .collect();
        let pi_aq = (0..n)
            .map(|i| DerData {
                symbol: lift(i),
                mat: vec![vec![Poly::zero(n); alg.m_q]; alg.m_q],
            })
            .collect();
        let mut pi_pp = PpComponent::zero(alg.m_p, alg.m_q);
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                let gvec: Vec<Poly> = (0..alg.m_q).map(|a| alg.g[a][al][be].clone()).collect();
                if gvec.iter().all(|p| p.is_zero()) {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        if pi[i][j].is_zero() {
                            continue;
                        }
                        // X_h(f) = Σ π^{ij} ∂ᵢ(h) ∂ⱼ(f)
                        let c: Vec<Poly> = gvec.iter().map(|g| g * &pi[i][j]).collect();
                        pi_pp.add_term(al, be, j + 1, i + 1, c);
                    }
                }
            }
        }
        BiDerivation::Deg0 {
            pi_aa: pi.to_vec(),
            pi_ap,
            pi_aq,
            pi_pp,
        }
    }
}

/// Homogeneous element for bracket evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Homog {
    A(Poly),
    P(Vec<Poly>),
    Q(Vec<Poly>),
}

impl Homog {
    pub fn degree(&self) -> i64 {
        match self {
            Homog::A(_) => 0,
            Homog::P(_) => 1,
            Homog::Q(_) => 2,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Homog::A(p) => p.is_zero(),
            Homog::P(v) | Homog::Q(v) => v.iter().all(|p| p.is_zero()),
        }
    }

    fn zero_of_degree(alg: &TrioleAlgebra, d: i64) -> Option<Homog> {
        let n = alg.n_vars;
        match d {
            0 => Some(Homog::A(Poly::zero(n))),
            1 => Some(Homog::P(vec![Poly::zero(n); alg.m_p])),
            2 => Some(Homog::Q(vec![Poly::zero(n); alg.m_q])),
            _ => None,
        }
    }

    fn sub(&self, other: &Homog) -> Homog {
        match (self, other) {
            (Homog::A(a), Homog::A(b)) => Homog::A(&(a.clone()) - b),
            (Homog::P(a), Homog::P(b)) => Homog::P(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            (Homog::Q(a), Homog::Q(b)) => Homog::Q(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            _ => panic!("degree mismatch in Homog::sub"),
        }
    }

    fn scale_int(&self, k: i64) -> Homog {
        match self {
            Homog::A(a) => Homog::A(a.scale_int(k)),
            Homog::P(v) => Homog::P(v.iter().map(|p| p.scale_int(k)).collect()),
            Homog::Q(v) => Homog::Q(v.iter().map(|p| p.scale_int(k)).collect()),
        }
    }
}

fn f_map_apply(
    f_map: &[Vec<ScalarDerivation>],
    q: &[Poly],
    a: &Poly,
    alg: &TrioleAlgebra,
) -> Vec<Poly> {
    // f(q)(a) ∈ P, with f A-linear in q
    let n = alg.n_vars;
    let mut out = vec![Poly::zero(n); alg.m_p];
    for (aq, u) in q.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for ga in 0..alg.m_p {
            out[ga] = &out[ga] + &(u * &f_map[aq][ga].apply(a));
        }
    }
    out
}

/// Extended degree −1 brackets (plain Leibniz extension of the tables).
fn degm1_bracket(
    bracket_p: &[Vec<Vec<Poly>>],
    anchor: &[ScalarDerivation],
    p_on_q: &[DerData],
    f_map: &[Vec<ScalarDerivation>],
    t1: &Homog,
    t2: &Homog,
    alg: &TrioleAlgebra,
) -> Option<Homog> {
    let n = alg.n_vars;
    match (t1, t2) {
        (Homog::A(_), Homog::A(_)) => None, // degree −1 component: empty
        (Homog::P(p), Homog::A(a)) => {
            let mut out = Poly::zero(n);
            for (al, f) in p.iter().enumerate() {
                out = &out + &(f * &anchor[al].apply(a));
            }
            Some(Homog::A(out))
        }
        (Homog::A(_), Homog::P(_)) => {
            Some(degm1_bracket(bracket_p, anchor, p_on_q, f_map, t2, t1, alg)?.scale_int(-1))
        }
        (Homog::P(p1), Homog::P(p2)) => Some(Homog::P(algebroid_bracket(
            bracket_p, anchor, p1, p2, alg.n_vars,
        ))),
        (Homog::Q(q), Homog::A(a)) => Some(Homog::P(f_map_apply(f_map, q, a, alg))),
        (Homog::A(_), Homog::Q(_)) => {
            Some(degm1_bracket(bracket_p, anchor, p_on_q, f_map, t2, t1, alg)?.scale_int(-1))
        }
        (Homog::P(p), Homog::Q(q)) => {
            // {f e_α, q} = f·{e_α, q}|_Q − g(f(q)(f), e_α)
            let mut out = vec![Poly::zero(n); alg.m_q];
            for (al, f) in p.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let der = p_on_q[al].apply(q);
                for (o, d) in out.iter_mut().zip(&der) {
                    *o = &*o + &(f * d);
                }
                let fq_f = f_map_apply(f_map, q, f, alg);
                let corr = alg.metric_apply(&fq_f, &alg.p_basis(al));
                for (o, c) in out.iter_mut().zip(&corr) {
                    *o = &*o - c;
                }
            }
            Some(Homog::Q(out))
        }
        (Homog::Q(_), Homog::P(_)) => {
            Some(degm1_bracket(bracket_p, anchor, p_on_q, f_map, t2, t1, alg)?.scale_int(-1))
        }
        (Homog::Q(_), Homog::Q(_)) => None, // degree 3 component
    }
}

/// Extended algebroid bracket with polynomial coefficients:
/// `[f e_a, h e_b] = f·α(e_a)(h)·e_b − h·α(e_b)(f)·e_a + f·h·[e_a,e_b]`.
pub fn algebroid_bracket(
    structure: &[Vec<Vec<Poly>>],
    anchor: &[ScalarDerivation],
    v1: &[Poly],
    v2: &[Poly],
    n: usize,
) -> Vec<Poly> {
    let rank = structure.len();
    let mut out = vec![Poly::zero(n); rank];
    for a in 0..rank {
        if v1[a].is_zero() {
            continue;
        }
        for b in 0..rank {
            // f·α(e_a)(h)·e_b
            let t1 = &v1[a] * &anchor[a].apply(&v2[b]);
            out[b] = &out[b] + &t1;
        }
    }
    for b in 0..rank {
        if v2[b].is_zero() {
            continue;
        }
        for a in 0..rank {
            let t2 = &v2[b] * &anchor[b].apply(&v1[a]);
            out[a] = &out[a] - &t2;
        }
    }
    for a in 0..rank {
        for b in 0..rank {
            let fh = &v1[a] * &v2[b];
            if fh.is_zero() {
                continue;
            }
            for c in 0..rank {
                if structure[a][b][c].is_zero() {
                    continue;
                }
                out[c] = &out[c] + &(&fh * &structure[a][b][c]);
            }
        }
    }
    out
}

/// Evaluate Π̃ on a homogeneous pair; `None` when the target degree
/// falls outside {0, 1, 2} (the bracket vanishes there).
pub fn eval_bracket(
    pi: &BiDerivation,
    t1: &Homog,
    t2: &Homog,
    alg: &TrioleAlgebra,
) -> Option<Homog> {
    let n = alg.n_vars;
    match pi {
        BiDerivation::Deg0 {
            pi_aa,
            pi_ap,
            pi_aq,
            pi_pp,
        } => {
            match (t1, t2) {
                (Homog::A(a), Homog::A(b)) => {
                    let mut out = Poly::zero(n);
                    for i in 0..n {
                        for j in 0..n {
                            if pi_aa[i][j].is_zero() {
                                continue;
                            }
                            out = &out
                                + &(&(&a.partial_derivative(i).unwrap()
                                    * &b.partial_derivative(j).unwrap())
                                    * &pi_aa[i][j]);
                        }
                    }
                    Some(Homog::A(out))
                }
                (Homog::A(a), Homog::P(p)) => {
                    let mut out = vec![Poly::zero(n); alg.m_p];
                    for i in 0..n {
                        let da = a.partial_derivative(i).unwrap();
                        if da.is_zero() {
                            continue;
                        }
                        let dp = pi_ap[i].apply(p);
                        for (o, v) in out.iter_mut().zip(&dp) {
                            *o = &*o + &(v * &da);
                        }
                    }
                    Some(Homog::P(out))
                }
                (Homog::P(_), Homog::A(_)) => Some(eval_bracket(pi, t2, t1, alg)?.scale_int(-1)),
                (Homog::A(a), Homog::Q(q)) => {
                    let mut out = vec![Poly::zero(n); alg.m_q];
                    for i in 0..n {
                        let da = a.partial_derivative(i).unwrap();
                        if da.is_zero() {
                            continue;
                        }
                        let dq = pi_aq[i].apply(q);
                        for (o, v) in out.iter_mut().zip(&dq) {
                            *o = &*o + &(v * &da);
                        }
                    }
                    Some(Homog::Q(out))
                }
                (Homog::Q(_), Homog::A(_)) => Some(eval_bracket(pi, t2, t1, alg)?.scale_int(-1)),
                (Homog::P(p1), Homog::P(p2)) => Some(Homog::Q(pi_pp.apply(p1, p2, n))),
                _ => None, // PQ, QP, QQ land above degree 2
            }
        }
        BiDerivation::Deg1 { pi_aa1, pi_ap1 } => match (t1, t2) {
            (Homog::A(a), Homog::A(b)) => {
                let mut out = vec![Poly::zero(n); alg.m_p];
                for i in 0..n {
                    for j in 0..n {
                        let w =
                            &a.partial_derivative(i).unwrap() * &b.partial_derivative(j).unwrap();
                        if w.is_zero() {
                            continue;
                        }
                        for (o, v) in out.iter_mut().zip(&pi_aa1[i][j]) {
                            *o = &*o + &(v * &w);
                        }
                    }
                }
                Some(Homog::P(out))
            }
            (Homog::A(a), Homog::P(p)) => {
                let mut out = vec![Poly::zero(n); alg.m_q];
                for i in 0..n {
                    let da = a.partial_derivative(i).unwrap();
                    if da.is_zero() {
                        continue;
                    }
                    let v = pi_ap1[i].apply(p, alg);
                    for (o, t) in out.iter_mut().zip(&v) {
                        *o = &*o + &(t * &da);
                    }
                }
                Some(Homog::Q(out))
            }
            (Homog::P(_), Homog::A(_)) => Some(eval_bracket(pi, t2, t1, alg)?.scale_int(-1)),
            _ => None,
        },
        BiDerivation::Deg2 { pi_q } => match (t1, t2) {
            (Homog::A(a), Homog::A(b)) => {
                let mut out = vec![Poly::zero(n); alg.m_q];
                for i in 0..n {
                    for j in 0..n {
                        let w =
                            &a.partial_derivative(i).unwrap() * &b.partial_derivative(j).unwrap();
                        if w.is_zero() {
                            continue;
                        }
                        for (o, v) in out.iter_mut().zip(&pi_q[i][j]) {
                            *o = &*o + &(v * &w);
                        }
                    }
                }
                Some(Homog::Q(out))
            }
            _ => None,
        },
        BiDerivation::DegMinus1 {
            bracket_p,
            anchor,
            p_on_q,
            f_map,
        } => degm1_bracket(bracket_p, anchor, p_on_q, f_map, t1, t2, alg),
        BiDerivation::DegMinus2 {
            bracket_q,
            anchor_q,
        } => match (t1, t2) {
            (Homog::Q(q), Homog::A(a)) => {
                let mut out = Poly::zero(n);
                for (aq, u) in q.iter().enumerate() {
                    out = &out + &(u * &anchor_q[aq].apply(a));
                }
                Some(Homog::A(out))
            }
            (Homog::A(_), Homog::Q(_)) => Some(eval_bracket(pi, t2, t1, alg)?.scale_int(-1)),
            (Homog::Q(q1), Homog::Q(q2)) => {
                Some(Homog::Q(algebroid_bracket(bracket_q, anchor_q, q1, q2, n)))
            }
            // {Q,P} lands in P but is not part of the characterized
            // datum; the Jacobiator is evaluated on A/Q slots only.
            _ => None,
        },
    }
}

/// PP symmetry sign for the convention: −1 (antisymmetric) for a
/// symmetric metric, +1 (symmetric) for an alternating one.
pub fn pp_symmetry_sign(alg: &TrioleAlgebra) -> i64 {
    match alg.convention {
        Convention::Koszul => 1,
        _ => -1,
    }
}

fn basis_mons(n: usize, d: u32) -> Vec<Poly> {
    monomials_up_to(n, d)
        .into_iter()
        .map(|m| Poly::monomial(n, &m.0, BigRational::from_integer(1.into())))
        .collect()
}

/// Slot-wise Leibniz rules and graded symmetry, checked exactly.
pub fn validate_biderivation(pi: &BiDerivation, alg: &TrioleAlgebra) -> ValidationReport {
    let n = alg.n_vars;
    match pi {
        BiDerivation::Deg0 {
            pi_aa,
            pi_ap,
            pi_aq,
            pi_pp,
        } => {
            for i in 0..n {
                for j in 0..n {
                    if pi_aa[i][j] != -&pi_aa[j][i] {
                        return ValidationReport::fail(Witness::new(
                            "π antisymmetry",
                            vec![i + 1, j + 1],
                        ));
                    }
                }
            }
            // shared symbols: σ(pi_ap[i]) = σ(pi_aq[i]) = Σ_j π^{ij}∂ⱼ
            for i in 0..n {
                let lift = ScalarDerivation::new((0..n).map(|j| pi_aa[i][j].clone()).collect());
                if pi_ap[i].symbol != lift || pi_aq[i].symbol != lift {
                    return ValidationReport::fail(Witness::new(
                        "AP/AQ symbol equals Hamiltonian lift",
                        vec![i + 1],
                    ));
                }
                // the pair (D_i, E_i) is a valid degree-0 derivation
                let der = GradedDerivation::Deg0 {
                    x_a: lift,
                    g_mat: pi_ap[i].mat.clone(),
                    h_mat: pi_aq[i].mat.clone(),
                };
                let rep = validate_derivation(&der, alg);
                if !rep.valid {
                    return ValidationReport::fail(Witness::new(
                        "slot-i pair is a degree-0 derivation",
                        vec![i + 1],
                    ));
                }
            }
            // PP slot-2 Leibniz: Π(p₁, a·p₂) = g(Π^{AP}(a,p₁), p₂) + a·Π(p₁,p₂)
            for a in basis_mons(n, 2) {
                for f in basis_mons(n, 1) {
                    for h in basis_mons(n, 1) {
                        for al in 0..alg.m_p {
                            for be in 0..alg.m_p {
                                let mut p1 = vec![Poly::zero(n); alg.m_p];
                                p1[al] = f.clone();
                                let mut p2 = vec![Poly::zero(n); alg.m_p];
                                p2[be] = h.clone();
                                let ap2: Vec<Poly> = p2.iter().map(|c| c * &a).collect();
                                let lhs = pi_pp.apply(&p1, &ap2, n);
                                let ap_p1 = match eval_bracket(
                                    pi,
                                    &Homog::A(a.clone()),
                                    &Homog::P(p1.clone()),
                                    alg,
                                ) {
                                    Some(Homog::P(v)) => v,
                                    _ => unreachable!(),
                                };
                                let tw = alg.metric_apply(&ap_p1, &p2);
                                let base = pi_pp.apply(&p1, &p2, n);
                                for b in 0..alg.m_q {
                                    let rhs = &tw[b] + &(&a * &base[b]);
                                    if lhs[b] != rhs {
                                        return ValidationReport::fail(Witness::new(
                                            "PP slot-2 Leibniz",
                                            vec![al + 1, be + 1, b + 1],
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // PP symmetry per convention
            let s = pp_symmetry_sign(alg);
            for f in basis_mons(n, 2) {
                for h in basis_mons(n, 2) {
                    for al in 0..alg.m_p {
                        for be in 0..alg.m_p {
                            let mut p1 = vec![Poly::zero(n); alg.m_p];
                            p1[al] = f.clone();
                            let mut p2 = vec![Poly::zero(n); alg.m_p];
                            p2[be] = h.clone();
                            let lhs = pi_pp.apply(&p1, &p2, n);
                            let rhs = pi_pp.apply(&p2, &p1, n);
                            for b in 0..alg.m_q {
                                if lhs[b] != rhs[b].scale_int(s) {
                                    return ValidationReport::fail(Witness::new(
                                        "PP graded symmetry",
                                        vec![al + 1, be + 1, b + 1],
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        BiDerivation::Deg1 { pi_aa1, pi_ap1 } => {
            if pi_ap1.len() != n
                || pi_ap1
                    .iter()
                    .any(|d| d.twist.len() != alg.m_p || d.mat.len() != alg.m_q)
            {
                return ValidationReport::fail(Witness::new("deg-1 slot shapes", vec![]));
            }
            for i in 0..n {
                for j in 0..n {
                    for al in 0..alg.m_p {
                        if pi_aa1[i][j][al] != -&pi_aa1[j][i][al] {
                            return ValidationReport::fail(Witness::new(
                                "π₁ antisymmetry",
                                vec![i + 1, j + 1, al + 1],
                            ));
                        }
                    }
                }
            }
            // Π̃₁^{AP}(a, b·p) = g(Π̃₁^{AA}(a,b), p) + b·Π̃₁^{AP}(a,p)
            for a in basis_mons(n, 2) {
                for b in basis_mons(n, 2) {
                    for al in 0..alg.m_p {
                        let p = alg.p_basis(al);
                        let bp: Vec<Poly> = p.iter().map(|c| c * &b).collect();
                        let lhs = match eval_bracket(pi, &Homog::A(a.clone()), &Homog::P(bp), alg) {
                            Some(Homog::Q(v)) => v,
                            _ => unreachable!(),
                        };
                        let aa =
                            match eval_bracket(pi, &Homog::A(a.clone()), &Homog::A(b.clone()), alg)
                            {
                                Some(Homog::P(v)) => v,
                                _ => unreachable!(),
                            };
                        let tw = alg.metric_apply(&aa, &p);
                        let base =
                            match eval_bracket(pi, &Homog::A(a.clone()), &Homog::P(p.clone()), alg)
                            {
                                Some(Homog::Q(v)) => v,
                                _ => unreachable!(),
                            };
                        for bq in 0..alg.m_q {
                            let rhs = &tw[bq] + &(&b * &base[bq]);
                            if lhs[bq] != rhs {
                                return ValidationReport::fail(Witness::new(
                                    "deg-1 AP Leibniz",
                                    vec![al + 1, bq + 1],
                                ));
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        BiDerivation::Deg2 { pi_q } => {
            for i in 0..n {
                for j in 0..n {
                    for a in 0..alg.m_q {
                        if pi_q[i][j][a] != -&pi_q[j][i][a] {
                            return ValidationReport::fail(Witness::new(
                                "Q-bivector antisymmetry",
                                vec![i + 1, j + 1, a + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        BiDerivation::DegMinus1 {
            bracket_p,
            anchor,
            p_on_q,
            ..
        } => {
            for a in 0..alg.m_p {
                for b in 0..alg.m_p {
                    for c in 0..alg.m_p {
                        if bracket_p[a][b][c] != -&bracket_p[b][a][c] {
                            return ValidationReport::fail(Witness::new(
                                "bracket antisymmetry",
                                vec![a + 1, b + 1, c + 1],
                            ));
                        }
                    }
                }
            }
            for (al, d) in p_on_q.iter().enumerate() {
                if d.symbol != anchor[al] {
                    return ValidationReport::fail(Witness::new(
                        "{p,−}|_Q symbol is the anchor",
                        vec![al + 1],
                    ));
                }
            }
            ValidationReport::ok()
        }
        BiDerivation::DegMinus2 { bracket_q, .. } => {
            for a in 0..alg.m_q {
                for b in 0..alg.m_q {
                    for c in 0..alg.m_q {
                        if bracket_q[a][b][c] != -&bracket_q[b][a][c] {
                            return ValidationReport::fail(Witness::new(
                                "bracket antisymmetry",
                                vec![a + 1, b + 1, c + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
    }
}

/// Bi-derivation degrees below −2 are admissible by degree counting
/// but carry no characterized component structure; reject them rather
/// than guess.
pub fn reject_uncharacterized_degree(deg: i64) -> CalcError {
    CalcError::NotCharacterized(deg)
}

/// Test elements for the Jacobiator: basis sections with monomial
/// coefficients of degree ≤ 2 per slot (the Jacobiator is a
/// multidifferential operator of order ≤ 2 per slot).
fn jacobi_test_elements(alg: &TrioleAlgebra, include_p: bool) -> Vec<Homog> {
    let n = alg.n_vars;
    let mut out = Vec::new();
    for m in basis_mons(n, 2) {
        out.push(Homog::A(m.clone()));
        if include_p {
            for al in 0..alg.m_p {
                let mut v = vec![Poly::zero(n); alg.m_p];
                v[al] = m.clone();
                out.push(Homog::P(v));
            }
        }
        for a in 0..alg.m_q {
            let mut v = vec![Poly::zero(n); alg.m_q];
            v[a] = m.clone();
            out.push(Homog::Q(v));
        }
    }
    out
}

/// Graded Jacobiator with convention-keyed signs:
/// `J = Π(t₁,Π(t₂,t₃)) + s_a·Π(t₃,Π(t₁,t₂)) − s_b·Π(t₂,Π(t₁,t₃))`,
/// plain: s_a = s_b = 1; koszul: s_a = (−1)^{(d₁+d₂)d₃}, s_b = (−1)^{d₁d₂}.
pub fn jacobiator(
    pi: &BiDerivation,
    t1: &Homog,
    t2: &Homog,
    t3: &Homog,
    alg: &TrioleAlgebra,
) -> Option<Homog> {
    let (d1, d2, d3) = (t1.degree(), t2.degree(), t3.degree());
    let (sa, sb) = match alg.convention {
        Convention::Koszul => (alg.sign(d1 + d2, d3), alg.sign(d1, d2)),
        _ => (1, 1),
    };
    let term = |a: &Homog, b: &Homog, c: &Homog| -> Option<Homog> {
        let inner = eval_bracket(pi, b, c, alg)?;
        eval_bracket(pi, a, &inner, alg)
    };
    let h = pi.degree();
    let out_deg = d1 + d2 + d3 + 2 * h;
    let mut acc = Homog::zero_of_degree(alg, out_deg)?;
    if let Some(v) = term(t1, t2, t3) {
        acc = acc.sub(&v.scale_int(-1));
    }
    if let Some(v) = term(t3, t1, t2) {
        acc = acc.sub(&v.scale_int(-sa));
    }
    if let Some(v) = term(t2, t1, t3) {
        acc = acc.sub(&v.scale_int(sb));
    }
    Some(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct SchoutenReport {
    pub zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// `[[Π,Π]] = 0` ⟺ the Jacobiator vanishes on all homogeneous triples
/// up to the soundness degree bound.
pub fn schouten_square(pi: &BiDerivation, alg: &TrioleAlgebra) -> SchoutenReport {
    // for degree −2 the P-component of the bracket is not part of the
    // characterized datum; Jacobiator runs over A/Q slots there
    let include_p = pi.degree() != -2;
    let elems = jacobi_test_elements(alg, include_p);
    for (i, t1) in elems.iter().enumerate() {
        for (j, t2) in elems.iter().enumerate() {
            for (k, t3) in elems.iter().enumerate() {
                if let Some(res) = jacobiator(pi, t1, t2, t3, alg) {
                    if !res.is_zero() {
                        return SchoutenReport {
                            zero: false,
                            witness: Some(Witness::new(
                                "Jacobiator residual",
                                vec![i + 1, j + 1, k + 1],
                            )),
                        };
                    }
                }
            }
        }
    }
    SchoutenReport {
        zero: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
    pub pp_symmetry: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PoissonReport {
    pub fn all_pass(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }
}

/// The four conditions of the degree-0 Poisson system, each evaluated
/// exactly on monomial bases; all four pass iff the Schouten square is
/// zero (the remaining homogeneous triples vanish for degree reasons).
pub fn poisson_check_deg0(pi: &BiDerivation, alg: &TrioleAlgebra) -> PoissonReport {
    assert!(matches!(pi, BiDerivation::Deg0 { .. }), "degree-0 check");
    let n = alg.n_vars;
    let mons2 = basis_mons(n, 2);
    let mut witness = None;
    let mut check = |d3: i64| -> bool {
        for (i, a0) in mons2.iter().enumerate() {
            for (j, a1) in mons2.iter().enumerate() {
                let t1 = Homog::A(a0.clone());
                let t2 = Homog::A(a1.clone());
                let thirds: Vec<Homog> = match d3 {
                    0 => mons2.iter().map(|m| Homog::A(m.clone())).collect(),
                    1 => mons2
                        .iter()
                        .flat_map(|m| (0..alg.m_p).map(move |al| (m, al)))
                        .map(|(m, al)| {
                            let mut v = vec![Poly::zero(n); alg.m_p];
                            v[al] = m.clone();
                            Homog::P(v)
                        })
                        .collect(),
                    _ => mons2
                        .iter()
                        .flat_map(|m| (0..alg.m_q).map(move |aq| (m, aq)))
                        .map(|(m, aq)| {
                            let mut v = vec![Poly::zero(n); alg.m_q];
                            v[aq] = m.clone();
                            Homog::Q(v)
                        })
                        .collect(),
                };
                for (k, t3) in thirds.iter().enumerate() {
                    if let Some(res) = jacobiator(pi, &t1, &t2, t3, alg) {
                        if !res.is_zero() {
                            if witness.is_none() {
                                witness = Some(Witness::new(
                                    "degree-0 Poisson condition",
                                    vec![i + 1, j + 1, k + 1],
                                ));
                            }
                            return false;
                        }
                    }
                }
            }
        }
        true
    };
    let cond1 = check(0);
    let cond2 = check(1);
    let cond3 = check(2);
    // condition 4: triples (a, p₀, p₁)
    let mut cond4 = true;
    'outer: for (i, a) in mons2.iter().enumerate() {
        for f in basis_mons(n, 1) {
            for h in basis_mons(n, 1) {
                for al in 0..alg.m_p {
                    for be in 0..alg.m_p {
                        let mut p0 = vec![Poly::zero(n); alg.m_p];
                        p0[al] = f.clone();
                        let mut p1 = vec![Poly::zero(n); alg.m_p];
                        p1[be] = h.clone();
                        let res =
                            jacobiator(pi, &Homog::A(a.clone()), &Homog::P(p0), &Homog::P(p1), alg);
                        if let Some(r) = res {
                            if !r.is_zero() {
                                cond4 = false;
                                if witness.is_none() {
                                    witness = Some(Witness::new(
                                        "condition (4): AQ/PP compatibility",
                                        vec![i + 1, al + 1, be + 1],
                                    ));
                                }
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    PoissonReport {
        cond1,
        cond2,
        cond3,
        cond4,
        pp_symmetry: if pp_symmetry_sign(alg) == 1 {
            "symmetric".into()
        } else {
            "antisymmetric".into()
        },
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn symplectic_pi(n: usize) -> Vec<Vec<Poly>> {
        let mut pi = vec![vec![Poly::zero(n); n]; n];
        pi[0][1] = Poly::one(n);
        pi[1][0] = Poly::from_int(n, -1);
        pi
    }

    #[test]
    fn symplectic_lift_is_valid_biderivation() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let pi = BiDerivation::symplectic_lift(&alg, &symplectic_pi(2));
        let rep = validate_biderivation(&pi, &alg);
        assert!(rep.valid, "witness: {:?}", rep.witness);
    }

    #[test]
    fn zero_biderivation_valid_and_poisson() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let zero = BiDerivation::Deg0 {
            pi_aa: vec![vec![Poly::zero(2); 2]; 2],
            pi_ap: vec![DerData::zero(2, 2); 2],
            pi_aq: vec![DerData::zero(2, 1); 2],
            pi_pp: PpComponent::zero(2, 1),
        };
        assert!(validate_biderivation(&zero, &alg).valid);
        assert!(schouten_square(&zero, &alg).zero);
        assert!(poisson_check_deg0(&zero, &alg).all_pass());
    }

    #[test]
    fn deg2_unconstrained() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let mut pi_q = vec![vec![vec![Poly::zero(2); 1]; 2]; 2];
        pi_q[0][1][0] = x(2, 0);
        pi_q[1][0][0] = -&x(2, 0);
        let pi = BiDerivation::Deg2 { pi_q };
        assert!(validate_biderivation(&pi, &alg).valid);
    }

    #[test]
    fn symplectic_lift_poisson_all_conditions() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let pi = BiDerivation::symplectic_lift(&alg, &symplectic_pi(2));
        let rep = poisson_check_deg0(&pi, &alg);
        assert!(rep.all_pass(), "{:?}", rep);
        assert_eq!(rep.pp_symmetry, "antisymmetric");
        assert!(schouten_square(&pi, &alg).zero);
    }

    #[test]
    fn perturbed_pp_fails_condition_4() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let mut pi = BiDerivation::symplectic_lift(&alg, &symplectic_pi(2));
        // antisymmetric x₁-coefficient Hom-perturbation of the PP slot:
        // still a bi-derivation, no longer Poisson
        if let BiDerivation::Deg0 { pi_pp, .. } = &mut pi {
            pi_pp.add_term(0, 1, 0, 0, vec![x(2, 0)]);
            pi_pp.add_term(1, 0, 0, 0, vec![-&x(2, 0)]);
        }
        assert!(validate_biderivation(&pi, &alg).valid);
        let rep = poisson_check_deg0(&pi, &alg);
        assert!(rep.cond1 && rep.cond2 && rep.cond3);
        assert!(!rep.cond4);
        assert!(rep.witness.is_some());
        assert!(!schouten_square(&pi, &alg).zero);
    }

    #[test]
    fn nonconstant_pi_with_naive_lifts_fails() {
        // in two variables every bivector is Poisson, so a genuinely
        // non-Poisson π needs n = 3: π^{12} = x₁, π^{23} = x₂ has
        // Jacobiator x₁ on (x₁,x₂,x₃)
        let alg = TrioleAlgebra::identity_metric(3, 2);
        let n = 3;
        let mut pi_mat = vec![vec![Poly::zero(n); n]; n];
        pi_mat[0][1] = x(n, 0);
        pi_mat[1][0] = -&x(n, 0);
        pi_mat[1][2] = x(n, 1);
        pi_mat[2][1] = -&x(n, 1);
        let pi = BiDerivation::symplectic_lift(&alg, &pi_mat);
        assert!(validate_biderivation(&pi, &alg).valid);
        assert!(!schouten_square(&pi, &alg).zero);
        // a nonconstant-but-Poisson π (2 variables) keeps the square zero
        let alg2 = TrioleAlgebra::identity_metric(2, 2);
        let mut pi2 = vec![vec![Poly::zero(2); 2]; 2];
        pi2[0][1] = x(2, 0);
        pi2[1][0] = -&x(2, 0);
        let lift2 = BiDerivation::symplectic_lift(&alg2, &pi2);
        assert!(schouten_square(&lift2, &alg2).zero);
    }

    #[test]
    fn poisson_iff_schouten_zero_cross_check() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let good = BiDerivation::symplectic_lift(&alg, &symplectic_pi(2));
        assert_eq!(
            poisson_check_deg0(&good, &alg).all_pass(),
            schouten_square(&good, &alg).zero
        );
        let mut bad = BiDerivation::symplectic_lift(&alg, &symplectic_pi(2));
        if let BiDerivation::Deg0 { pi_pp, .. } = &mut bad {
            pi_pp.add_term(0, 1, 0, 0, vec![x(2, 1)]);
            pi_pp.add_term(1, 0, 0, 0, vec![-&x(2, 1)]);
        }
        assert_eq!(
            poisson_check_deg0(&bad, &alg).all_pass(),
            schouten_square(&bad, &alg).zero
        );
    }

    #[test]
    fn deg1_biderivation_validation() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let n = 2;
        // π₁ constant P-valued bivector + matching Der^g slots (zero twist)
        let mut pi_aa1 = vec![vec![vec![Poly::zero(n); 2]; 2]; 2];
        pi_aa1[0][1][0] = Poly::one(n);
        pi_aa1[1][0][0] = Poly::from_int(n, -1);
        // Leibniz needs: Σᵢ ∂ᵢ(a)·□ᵢ(bp) with twist matching π₁:
        // □ᵢ twist X_i(b) = Σ_j π₁[i][j]·∂ⱼ(b)
        let pi_ap1 = (0..n)
            .map(|i| DerGpq {
                twist: (0..alg.m_p)
                    .map(|al| {
                        ScalarDerivation::new((0..n).map(|j| pi_aa1[i][j][al].clone()).collect())
                    })
                    .collect(),
                mat: vec![vec![Poly::zero(n); alg.m_p]; alg.m_q],
            })
            .collect();
        let pi = BiDerivation::Deg1 { pi_aa1, pi_ap1 };
        assert!(validate_biderivation(&pi, &alg).valid);
    }

    #[test]
    fn uncharacterized_degrees_rejected() {
        assert!(matches!(
            reject_uncharacterized_degree(-3),
            CalcError::NotCharacterized(-3)
        ));
    }
}
