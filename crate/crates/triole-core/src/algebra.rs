//! Triole algebras `A ⊕ (P, g) ⊕ Q`, their elements and morphisms, and
//! the constructions: gauge action, orthogonal sum, triolic product,
//! determinant triole, complements and Lagrangians, base change.
//!
//! The metric is stored coordinatewise as `g[A][α][β] = g_{αβ}^A`, the
//! ε_A-component of `g(e_α, e_β)`.

use crate::diffop::MatDiffOp;
use crate::linalg::{in_span, PolyMatrix};
use crate::poly::{monomials_up_to, Poly};
use crate::report::{ValidationReport, Witness};
use crate::CalcError;
use num::BigRational;
use serde::{Deserialize, Serialize};

/// Symmetry convention for the degree-1 multiplication. `Plain` keeps a
/// symmetric g with sign-free calculus; `Koszul` keeps an alternating g
/// with full Koszul signs; `None` imposes no symmetry (plain signs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Plain,
    Koszul,
    None,
}

impl Convention {
    /// Sign `(−1)^{d₁·d₂}` when Koszul, `+1` otherwise.
    pub fn sign(&self, d1: i64, d2: i64) -> i64 {
        match self {
            Convention::Koszul if (d1 * d2) % 2 != 0 => -1,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrioleAlgebra {
    pub n_vars: usize,
    pub m_p: usize,
    pub m_q: usize,
    /// g[A][α][β] = g_{αβ}^A
    pub g: Vec<Vec<Vec<Poly>>>,
    pub convention: Convention,
}

/// Homogeneous-component container for elements of 𝒯.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrioleElement {
    pub a: Poly,
    pub p: Vec<Poly>,
    pub q: Vec<Poly>,
}

impl TrioleElement {
    pub fn zero(alg: &TrioleAlgebra) -> Self {
        TrioleElement {
            a: Poly::zero(alg.n_vars),
            p: vec![Poly::zero(alg.n_vars); alg.m_p],
            q: vec![Poly::zero(alg.n_vars); alg.m_q],
        }
    }

    pub fn from_a(alg: &TrioleAlgebra, a: Poly) -> Self {
        let mut t = TrioleElement::zero(alg);
        t.a = a;
        t
    }

    pub fn from_p(alg: &TrioleAlgebra, p: Vec<Poly>) -> Self {
        let mut t = TrioleElement::zero(alg);
        assert_eq!(p.len(), alg.m_p);
        t.p = p;
        t
    }

    pub fn from_q(alg: &TrioleAlgebra, q: Vec<Poly>) -> Self {
        let mut t = TrioleElement::zero(alg);
        assert_eq!(q.len(), alg.m_q);
        t.q = q;
        t
    }

    pub fn add(&self, other: &TrioleElement) -> TrioleElement {
        TrioleElement {
            a: &self.a + &other.a,
            p: self.p.iter().zip(&other.p).map(|(x, y)| x + y).collect(),
            q: self.q.iter().zip(&other.q).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &TrioleElement) -> TrioleElement {
        TrioleElement {
            a: &self.a - &other.a,
            p: self.p.iter().zip(&other.p).map(|(x, y)| x - y).collect(),
            q: self.q.iter().zip(&other.q).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> TrioleElement {
        TrioleElement {
            a: self.a.scale_int(k),
            p: self.p.iter().map(|x| x.scale_int(k)).collect(),
            q: self.q.iter().map(|x| x.scale_int(k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.p.iter().all(|x| x.is_zero()) && self.q.iter().all(|x| x.is_zero())
    }
}

/// Degree-zero algebra morphism (ψ₀ = id_A always).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrioleMorphism {
    /// m_P' × m_P
    pub psi1: Vec<Vec<Poly>>,
    /// m_Q' × m_Q
    pub psi2: Vec<Vec<Poly>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismClass {
    Invalid,
    Morphism,
    Isometry,
    Similarity,
}

/// Sub-A-module of P given by (possibly redundant) generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    pub generators: Vec<Vec<Poly>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagrangianClass {
    None,
    SubLagrangian,
    Lagrangian,
}

impl TrioleAlgebra {
    pub fn new(
        n_vars: usize,
        m_p: usize,
        m_q: usize,
        g: Vec<Vec<Vec<Poly>>>,
        convention: Convention,
    ) -> Result<Self, CalcError> {
        if g.len() != m_q {
            return Err(CalcError::ShapeMismatch(format!(
                "metric has {} Q-slices, expected {}",
                g.len(),
                m_q
            )));
        }
        for slice in &g {
            if slice.len() != m_p || slice.iter().any(|row| row.len() != m_p) {
                return Err(CalcError::ShapeMismatch(
                    "metric slice is not m_P×m_P".into(),
                ));
            }
            for row in slice {
                for p in row {
                    if p.n_vars() != n_vars {
                        return Err(CalcError::RingMismatch {
                            expected: n_vars,
                            got: p.n_vars(),
                        });
                    }
                }
            }
        }
        Ok(TrioleAlgebra {
            n_vars,
            m_p,
            m_q,
            g,
            convention,
        })
    }

    /// Identity metric: m_Q = 1, g_{αβ} = δ_{αβ}. Plain convention.
    pub fn identity_metric(n_vars: usize, m_p: usize) -> Self {
        let g = vec![(0..m_p)
            .map(|a| {
                (0..m_p)
                    .map(|b| {
                        if a == b {
                            Poly::one(n_vars)
                        } else {
                            Poly::zero(n_vars)
                        }
                    })
                    .collect()
            })
            .collect()];
        TrioleAlgebra::new(n_vars, m_p, 1, g, Convention::Plain).unwrap()
    }

    /// Alternating rank-2 metric g₁₂ = 1 = −g₂₁, m_Q = 1, Koszul.
    pub fn alternating_rank2(n_vars: usize) -> Self {
        let mut g = vec![vec![vec![Poly::zero(n_vars); 2]; 2]];
        g[0][0][1] = Poly::one(n_vars);
        g[0][1][0] = Poly::from_int(n_vars, -1);
        TrioleAlgebra::new(n_vars, 2, 1, g, Convention::Koszul).unwrap()
    }

    /// Diagonal scalar metric (m_Q = 1) from the given diagonal entries.
    pub fn diagonal_metric(n_vars: usize, diag: Vec<Poly>) -> Self {
        let m_p = diag.len();
        let mut g = vec![vec![vec![Poly::zero(n_vars); m_p]; m_p]];
        for (i, d) in diag.into_iter().enumerate() {
            g[0][i][i] = d;
        }
        TrioleAlgebra::new(n_vars, m_p, 1, g, Convention::Plain).unwrap()
    }

    /// g(p₁, p₂) ∈ Q.
    pub fn metric_apply(&self, p1: &[Poly], p2: &[Poly]) -> Vec<Poly> {
        assert_eq!(p1.len(), self.m_p);
        assert_eq!(p2.len(), self.m_p);
        (0..self.m_q)
            .map(|a| {
                let mut acc = Poly::zero(self.n_vars);
                for al in 0..self.m_p {
                    for be in 0..self.m_p {
                        if self.g[a][al][be].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&p1[al] * &p2[be]) * &self.g[a][al][be]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sign(&self, d1: i64, d2: i64) -> i64 {
        self.convention.sign(d1, d2)
    }

    /// Basis vector e_α of P.
    pub fn p_basis(&self, alpha: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(self.n_vars); self.m_p];
        v[alpha] = Poly::one(self.n_vars);
        v
    }

    /// Basis vector ε_A of Q.
    pub fn q_basis(&self, a: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(self.n_vars); self.m_q];
        v[a] = Poly::one(self.n_vars);
        v
    }
}

/// Graded product in 𝒯: `(a₁a₂, a₁p₂+a₂p₁, a₁q₂+a₂q₁+g(p₁,p₂))`.
/// Q·Q = 0 holds by construction.
pub fn multiply(
    t1: &TrioleElement,
    t2: &TrioleElement,
    alg: &TrioleAlgebra,
) -> Result<TrioleElement, CalcError> {
    if t1.p.len() != alg.m_p
        || t2.p.len() != alg.m_p
        || t1.q.len() != alg.m_q
        || t2.q.len() != alg.m_q
    {
        return Err(CalcError::ShapeMismatch(
            "element ranks do not match algebra".into(),
        ));
    }
    let a = &t1.a * &t2.a;
    let p = (0..alg.m_p)
        .map(|i| &(&t1.a * &t2.p[i]) + &(&t2.a * &t1.p[i]))
        .collect();
    let gpp = alg.metric_apply(&t1.p, &t2.p);
    let q = (0..alg.m_q)
        .map(|i| &(&(&t1.a * &t2.q[i]) + &(&t2.a * &t1.q[i])) + &gpp[i])
        .collect();
    Ok(TrioleElement { a, p, q })
}

/// Checks the symmetry demanded by the convention, associativity on a
/// monomial basis (sound by bilinearity), and Q·Q = 0.
pub fn validate_algebra(alg: &TrioleAlgebra) -> ValidationReport {
    // symmetry of g per convention
    for a in 0..alg.m_q {
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                let lhs = &alg.g[a][al][be];
                let rhs = &alg.g[a][be][al];
                let ok = match alg.convention {
                    Convention::Plain => lhs == rhs,
                    Convention::Koszul => *lhs == -rhs,
                    Convention::None => true,
                };
                if !ok {
                    return ValidationReport::fail(Witness::new(
                        "metric symmetry per convention",
                        vec![al + 1, be + 1],
                    ));
                }
            }
        }
    }
    // Q·Q = 0 on basis elements
    for a in 0..alg.m_q {
        for b in 0..alg.m_q {
            let qa = TrioleElement::from_q(alg, alg.q_basis(a));
            let qb = TrioleElement::from_q(alg, alg.q_basis(b));
            let prod = multiply(&qa, &qb, alg).unwrap();
            if !prod.is_zero() {
                return ValidationReport::fail(Witness::new("Q·Q = 0", vec![a + 1, b + 1]));
            }
        }
    }
    // associativity on homogeneous monomial triples
    let mons = monomials_up_to(alg.n_vars, 1);
    let mut gens: Vec<TrioleElement> = Vec::new();
    for m in &mons {
        let f = Poly::monomial(alg.n_vars, &m.0, BigRational::from_integer(1.into()));
        gens.push(TrioleElement::from_a(alg, f.clone()));
        for al in 0..alg.m_p {
            let mut v = vec![Poly::zero(alg.n_vars); alg.m_p];
            v[al] = f.clone();
            gens.push(TrioleElement::from_p(alg, v));
        }
        for a in 0..alg.m_q {
            let mut v = vec![Poly::zero(alg.n_vars); alg.m_q];
            v[a] = f.clone();
            gens.push(TrioleElement::from_q(alg, v));
        }
    }
    for (i, t1) in gens.iter().enumerate() {
        for (j, t2) in gens.iter().enumerate() {
            for (k, t3) in gens.iter().enumerate() {
                let left = multiply(&multiply(t1, t2, alg).unwrap(), t3, alg).unwrap();
                let right = multiply(t1, &multiply(t2, t3, alg).unwrap(), alg).unwrap();
                if left != right {
                    return ValidationReport::fail(Witness::new(
                        "associativity",
                        vec![i + 1, j + 1, k + 1],
                    ));
                }
            }
        }
    }
    ValidationReport::ok()
}

/// Matrix of the adjoint `g♯: P → Hom(P,Q)` in the standard bases:
/// order-0 operator of shape `(m_P·m_Q) × m_P`, row (A,β) column α
/// carrying `g_{αβ}^A`.
pub fn adjoint_map(alg: &TrioleAlgebra) -> MatDiffOp {
    let rows: Vec<Vec<Poly>> = (0..alg.m_q * alg.m_p)
        .map(|ri| {
            let a = ri / alg.m_p;
            let be = ri % alg.m_p;
            (0..alg.m_p).map(|al| alg.g[a][al][be].clone()).collect()
        })
        .collect();
    MatDiffOp::from_poly_matrix(&rows)
}

fn adjoint_poly_matrix(alg: &TrioleAlgebra) -> PolyMatrix {
    PolyMatrix::from_rows(
        (0..alg.m_q * alg.m_p)
            .map(|ri| {
                let a = ri / alg.m_p;
                let be = ri % alg.m_p;
                (0..alg.m_p).map(|al| alg.g[a][al][be].clone()).collect()
            })
            .collect(),
    )
}

/// g is nondegenerate iff g♯ has trivial kernel over the fraction field.
pub fn is_nondegenerate(alg: &TrioleAlgebra) -> bool {
    adjoint_poly_matrix(alg).rank() == alg.m_p
}

/// The quadratic form `q_b(p) = g(p, p)`.
pub fn quadratic_from_bilinear(alg: &TrioleAlgebra, p: &[Poly]) -> Vec<Poly> {
    alg.metric_apply(p, p)
}

/// Checks `b'∘(ψ₁×ψ₁) = ψ₂∘b` as a polynomial identity and classifies
/// the morphism.
pub fn validate_morphism(
    psi: &TrioleMorphism,
    src: &TrioleAlgebra,
    dst: &TrioleAlgebra,
) -> Result<MorphismClass, CalcError> {
    let mp = src.m_p;
    let mq = src.m_q;
    let mp2 = dst.m_p;
    let mq2 = dst.m_q;
    if psi.psi1.len() != mp2 || psi.psi1.iter().any(|r| r.len() != mp) {
        return Err(CalcError::ShapeMismatch("psi1 must be m_P'×m_P".into()));
    }
    if psi.psi2.len() != mq2 || psi.psi2.iter().any(|r| r.len() != mq) {
        return Err(CalcError::ShapeMismatch("psi2 must be m_Q'×m_Q".into()));
    }
    // relation: Σ_{γδ} ψ1[γ][α]ψ1[δ][β] g'[A'][γ][δ] = Σ_A ψ2[A'][A] g[A][α][β]
    for a2 in 0..mq2 {
        for al in 0..mp {
            for be in 0..mp {
                let mut lhs = Poly::zero(src.n_vars);
                for ga in 0..mp2 {
                    for de in 0..mp2 {
                        if dst.g[a2][ga][de].is_zero() {
                            continue;
                        }
                        lhs =
                            &lhs + &(&(&psi.psi1[ga][al] * &psi.psi1[de][be]) * &dst.g[a2][ga][de]);
                    }
                }
                let mut rhs = Poly::zero(src.n_vars);
                for a in 0..mq {
                    rhs = &rhs + &(&psi.psi2[a2][a] * &src.g[a][al][be]);
                }
                if lhs != rhs {
                    return Ok(MorphismClass::Invalid);
                }
            }
        }
    }
    let psi1_invertible = mp == mp2 && PolyMatrix::from_rows(psi.psi1.clone()).det_is_unit();
    let psi2_invertible = mq == mq2 && PolyMatrix::from_rows(psi.psi2.clone()).det_is_unit();
    let psi2_identity = mq == mq2 && {
        let id = PolyMatrix::identity(src.n_vars, mq);
        PolyMatrix::from_rows(psi.psi2.clone()) == id
    };
    if psi2_identity && psi1_invertible {
        Ok(MorphismClass::Isometry)
    } else if psi1_invertible && psi2_invertible {
        Ok(MorphismClass::Similarity)
    } else {
        Ok(MorphismClass::Morphism)
    }
}

/// Gauge action of `Aut(P) × Aut(Q)`:
/// `(λg)(p₁,p₂) = ρ_Q g(ρ_P⁻¹ p₁, ρ_P⁻¹ p₂)`.
pub fn gauge_act(
    rho_p: &[Vec<Poly>],
    rho_q: &[Vec<Poly>],
    alg: &TrioleAlgebra,
) -> Result<TrioleAlgebra, CalcError> {
    let rp = PolyMatrix::from_rows(rho_p.to_vec());
    let rq = PolyMatrix::from_rows(rho_q.to_vec());
    if rp.rows != alg.m_p || rp.cols != alg.m_p || rq.rows != alg.m_q || rq.cols != alg.m_q {
        return Err(CalcError::ShapeMismatch("gauge pair shapes".into()));
    }
    let rp_inv = rp.inverse_unit_det()?;
    let mut g = vec![vec![vec![Poly::zero(alg.n_vars); alg.m_p]; alg.m_p]; alg.m_q];
    for a2 in 0..alg.m_q {
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                let mut acc = Poly::zero(alg.n_vars);
                for a in 0..alg.m_q {
                    for de in 0..alg.m_p {
                        for ga in 0..alg.m_p {
                            if alg.g[a][de][ga].is_zero() {
                                continue;
                            }
                            let c =
                                &(rq.entry(a2, a) * rp_inv.entry(de, al)) * rp_inv.entry(ga, be);
                            acc = &acc + &(&c * &alg.g[a][de][ga]);
                        }
                    }
                }
                g[a2][al][be] = acc;
            }
        }
    }
    TrioleAlgebra::new(alg.n_vars, alg.m_p, alg.m_q, g, alg.convention)
}

fn plain_symmetric(g: &[Vec<Vec<Poly>>]) -> bool {
    g.iter()
        .all(|s| (0..s.len()).all(|a| (0..s.len()).all(|b| s[a][b] == s[b][a])))
}

fn alternating(g: &[Vec<Vec<Poly>>]) -> bool {
    g.iter()
        .all(|s| (0..s.len()).all(|a| (0..s.len()).all(|b| s[a][b] == -&s[b][a])))
}

/// Classify the symmetry of a metric tensor into a convention flag.
pub fn classify_convention(g: &[Vec<Vec<Poly>>]) -> Convention {
    if plain_symmetric(g) {
        Convention::Plain
    } else if alternating(g) {
        Convention::Koszul
    } else {
        Convention::None
    }
}

/// Triolic orthogonal sum: P-part is the direct sum, the form evaluates
/// blockwise with zero cross terms. Requires a shared Q.
pub fn orthogonal_sum(
    alg1: &TrioleAlgebra,
    alg2: &TrioleAlgebra,
) -> Result<TrioleAlgebra, CalcError> {
    if alg1.n_vars != alg2.n_vars {
        return Err(CalcError::RingMismatch {
            expected: alg1.n_vars,
            got: alg2.n_vars,
        });
    }
    if alg1.m_q != alg2.m_q {
        return Err(CalcError::ShapeMismatch(
            "orthogonal sum needs equal Q-rank".into(),
        ));
    }
    let mp = alg1.m_p + alg2.m_p;
    let mut g = vec![vec![vec![Poly::zero(alg1.n_vars); mp]; mp]; alg1.m_q];
    for a in 0..alg1.m_q {
        for al in 0..alg1.m_p {
            for be in 0..alg1.m_p {
                g[a][al][be] = alg1.g[a][al][be].clone();
            }
        }
        for al in 0..alg2.m_p {
            for be in 0..alg2.m_p {
                g[a][alg1.m_p + al][alg1.m_p + be] = alg2.g[a][al][be].clone();
            }
        }
    }
    let conv = classify_convention(&g);
    TrioleAlgebra::new(alg1.n_vars, mp, alg1.m_q, g, conv)
}

/// Triolic product: ranks multiply and
/// `(b⊗b')(p₁⊗p₁', p₂⊗p₂') = b(p₁,p₂) ⊗ b'(p₁',p₂')` in Kronecker
/// coordinates.
pub fn triolic_product(
    alg1: &TrioleAlgebra,
    alg2: &TrioleAlgebra,
) -> Result<TrioleAlgebra, CalcError> {
    if alg1.n_vars != alg2.n_vars {
        return Err(CalcError::RingMismatch {
            expected: alg1.n_vars,
            got: alg2.n_vars,
        });
    }
    let mp = alg1.m_p * alg2.m_p;
    let mq = alg1.m_q * alg2.m_q;
    let mut g = vec![vec![vec![Poly::zero(alg1.n_vars); mp]; mp]; mq];
    for a1 in 0..alg1.m_q {
        for a2 in 0..alg2.m_q {
            let a = a1 * alg2.m_q + a2;
            for al1 in 0..alg1.m_p {
                for al2 in 0..alg2.m_p {
                    let al = al1 * alg2.m_p + al2;
                    for be1 in 0..alg1.m_p {
                        for be2 in 0..alg2.m_p {
                            let be = be1 * alg2.m_p + be2;
                            g[a][al][be] = &alg1.g[a1][al1][be1] * &alg2.g[a2][al2][be2];
                        }
                    }
                }
            }
        }
    }
    let conv = classify_convention(&g);
    TrioleAlgebra::new(alg1.n_vars, mp, mq, g, conv)
}

/// Determinant triole: P-part of rank 1 (det P), Q-part `Q^{⊗m_P}`; the
/// form sends wedge pairs to `det(g(pᵢ, pⱼ'))` expanded in Kronecker
/// coordinates of `Q^{⊗m_P}`. Capped at m_P ≤ 4.
pub fn determinant_triole(alg: &TrioleAlgebra) -> Result<TrioleAlgebra, CalcError> {
    let n = alg.m_p;
    if n > 4 {
        return Err(CalcError::RankCapExceeded(format!(
            "determinant triole requires m_P ≤ 4, got {}",
            n
        )));
    }
    let mq_out = alg.m_q.pow(n as u32);
    // det(g(e_i, e_j)) = Σ_σ sgn(σ) Π_i g(e_i, e_{σ(i)}): each product of n
    // Q-elements is a Q^{⊗n} coordinate vector.
    let mut det_coord = vec![Poly::zero(alg.n_vars); mq_out];
    let perms = permutations(n);
    for (perm, sgn) in perms {
        // tensor product over i of the Q-vectors g(e_i, e_{perm(i)})
        let mut acc: Vec<Poly> = vec![Poly::one(alg.n_vars)];
        for i in 0..n {
            let q_vec: Vec<Poly> = (0..alg.m_q).map(|a| alg.g[a][i][perm[i]].clone()).collect();
            let mut next = Vec::with_capacity(acc.len() * alg.m_q);
            for t in &acc {
                for qc in &q_vec {
                    next.push(t * qc);
                }
            }
            acc = next;
        }
        for (idx, v) in acc.into_iter().enumerate() {
            det_coord[idx] = &det_coord[idx] + &v.scale_int(sgn);
        }
    }
    // assemble metric tensor: g_out[A][0][0] = det_coord[A]
    let g_out: Vec<Vec<Vec<Poly>>> = (0..mq_out)
        .map(|a| vec![vec![det_coord[a].clone()]])
        .collect();
    let conv = classify_convention(&g_out);
    TrioleAlgebra::new(alg.n_vars, 1, mq_out, g_out, conv)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, i64)>, sgn: i64) {
        if k == items.len() {
            out.push((items.clone(), sgn));
            return;
        }
        for i in k..items.len() {
            let s = if i == k { sgn } else { -sgn };
            items.swap(k, i);
            rec(items, k + 1, out, s);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), 0, &mut out, 1);
    out
}

/// The Q-valued orthogonal complement `S⊥ = ker(i° ∘ g♯)`: all v with
/// g(v, s) = 0 for every generator s, computed over the fraction field
/// with denominators cleared.
pub fn orthogonal_complement(s: &Submodule, alg: &TrioleAlgebra) -> Submodule {
    if s.generators.is_empty() {
        // S = 0: the complement is all of P
        return Submodule {
            generators: (0..alg.m_p).map(|i| alg.p_basis(i)).collect(),
        };
    }
    // rows indexed by (generator j, Q-index A), columns by α:
    // Σ_α v^α g(e_α, s_j)^A = 0
    let mut rows = Vec::new();
    for gen in &s.generators {
        for a in 0..alg.m_q {
            let row: Vec<Poly> = (0..alg.m_p)
                .map(|al| {
                    let mut acc = Poly::zero(alg.n_vars);
                    for be in 0..alg.m_p {
                        acc = &acc + &(&alg.g[a][al][be] * &gen[be]);
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
    }
    Submodule {
        generators: PolyMatrix::from_rows(rows).kernel_basis(),
    }
}

/// Classify S against S⊥ (membership over the fraction field).
pub fn lagrangian_classify(s: &Submodule, alg: &TrioleAlgebra) -> LagrangianClass {
    let perp = orthogonal_complement(s, alg);
    let s_in_perp = s.generators.iter().all(|v| in_span(&perp.generators, v));
    if !s_in_perp {
        return LagrangianClass::None;
    }
    let perp_in_s = perp.generators.iter().all(|v| in_span(&s.generators, v));
    let g_restricted_zero = s.generators.iter().all(|v| {
        s.generators
            .iter()
            .all(|w| alg.metric_apply(v, w).iter().all(|p| p.is_zero()))
    });
    if perp_in_s && g_restricted_zero {
        LagrangianClass::Lagrangian
    } else {
        LagrangianClass::SubLagrangian
    }
}

/// The free symmetric triole on rank m: Q = Sym²(P) with the
/// symmetrizer as metric, plain convention.
pub fn free_symmetric_triole(m: usize, n_vars: usize) -> TrioleAlgebra {
    // basis of Sym²: pairs (i,j) with i ≤ j in lexicographic order
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i..m {
            pairs.push((i, j));
        }
    }
    let mq = pairs.len();
    let mut g = vec![vec![vec![Poly::zero(n_vars); m]; m]; mq];
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        g[idx][i][j] = Poly::one(n_vars);
        if i != j {
            g[idx][j][i] = Poly::one(n_vars);
        }
    }
    TrioleAlgebra::new(n_vars, m, mq, g, Convention::Plain).unwrap()
}

/// Base change along `φ: A → B`, x_i ↦ images[i]: same ranks, metric
/// coefficients substituted.
pub fn base_change(alg: &TrioleAlgebra, images: &[Poly]) -> Result<TrioleAlgebra, CalcError> {
    if images.len() != alg.n_vars {
        return Err(CalcError::MalformedSubstitution(format!(
            "need {} images, got {}",
            alg.n_vars,
            images.len()
        )));
    }
    let target_n = images.first().map(|p| p.n_vars()).unwrap_or(alg.n_vars);
    let mut g = Vec::with_capacity(alg.m_q);
    for slice in &alg.g {
        let mut new_slice = Vec::with_capacity(alg.m_p);
        for row in slice {
            let mut new_row = Vec::with_capacity(alg.m_p);
            for p in row {
                new_row.push(p.substitute(images)?);
            }
            new_slice.push(new_row);
        }
        g.push(new_slice);
    }
    TrioleAlgebra::new(target_n, alg.m_p, alg.m_q, g, alg.convention)
}
