//! Truncated triolic modules `(R₀, R₁, R₂; λ₀, λ₁, ν)` and the
//! module-valued derivations / Der-operators living on them.

use crate::algebra::{Convention, TrioleAlgebra};
use crate::derivation::GradedDerivation;
use crate::diffop::MatDiffOp;
use crate::poly::{monomials_up_to, Poly};
use crate::report::{ValidationReport, Witness};
use num::BigRational;

/// Structure maps as rank-3 coefficient arrays:
/// `λ₀[α][u][v]`: the f_v-component of λ₀(e_α, r_u), and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTriModule {
    pub r0: usize,
    pub r1: usize,
    pub r2: usize,
    /// m_P × r0 × r1
    pub lambda0: Vec<Vec<Vec<Poly>>>,
    /// m_P × r1 × r2
    pub lambda1: Vec<Vec<Vec<Poly>>>,
    /// m_Q × r0 × r2
    pub nu: Vec<Vec<Vec<Poly>>>,
}

impl TruncatedTriModule {
    /// The algebra 𝒯 as a module over itself: R = (A, P, Q) with
    /// λ₀ = module action of P on A, λ₁ = g, ν = action of Q on A.
    pub fn regular(alg: &TrioleAlgebra) -> Self {
        let n = alg.n_vars;
        // λ₀(e_α, 1) = e_α
        let lambda0 = (0..alg.m_p)
            .map(|al| {
                vec![(0..alg.m_p)
                    .map(|v| if v == al { Poly::one(n) } else { Poly::zero(n) })
                    .collect()]
            })
            .collect();
        // λ₁(e_α, e_β) = g(e_α, e_β)
        let lambda1 = (0..alg.m_p)
            .map(|al| {
                (0..alg.m_p)
                    .map(|be| (0..alg.m_q).map(|a| alg.g[a][al][be].clone()).collect())
                    .collect()
            })
            .collect();
        // ν(ε_A, 1) = ε_A
        let nu = (0..alg.m_q)
            .map(|a| {
                vec![(0..alg.m_q)
                    .map(|v| if v == a { Poly::one(n) } else { Poly::zero(n) })
                    .collect()]
            })
            .collect();
        TruncatedTriModule {
            r0: 1,
            r1: alg.m_p,
            r2: alg.m_q,
            lambda0,
            lambda1,
            nu,
        }
    }

    pub fn zero_maps(alg: &TrioleAlgebra, r0: usize, r1: usize, r2: usize) -> Self {
        let n = alg.n_vars;
        TruncatedTriModule {
            r0,
            r1,
            r2,
            lambda0: vec![vec![vec![Poly::zero(n); r1]; r0]; alg.m_p],
            lambda1: vec![vec![vec![Poly::zero(n); r2]; r1]; alg.m_p],
            nu: vec![vec![vec![Poly::zero(n); r2]; r0]; alg.m_q],
        }
    }

    pub fn lambda0_apply(&self, p: &[Poly], r: &[Poly], alg: &TrioleAlgebra) -> Vec<Poly> {
        bilinear_apply(&self.lambda0, p, r, alg.n_vars, self.r1)
    }

    pub fn lambda1_apply(&self, p: &[Poly], r: &[Poly], alg: &TrioleAlgebra) -> Vec<Poly> {
        bilinear_apply(&self.lambda1, p, r, alg.n_vars, self.r2)
    }

    pub fn nu_apply(&self, q: &[Poly], r: &[Poly], alg: &TrioleAlgebra) -> Vec<Poly> {
        bilinear_apply(&self.nu, q, r, alg.n_vars, self.r2)
    }
}

fn bilinear_apply(
    tensor: &[Vec<Vec<Poly>>],
    left: &[Poly],
    right: &[Poly],
    n: usize,
    out_rank: usize,
) -> Vec<Poly> {
    let mut out = vec![Poly::zero(n); out_rank];
    for (i, li) in left.iter().enumerate() {
        if li.is_zero() {
            continue;
        }
        for (u, ru) in right.iter().enumerate() {
            if ru.is_zero() {
                continue;
            }
            for v in 0..out_rank {
                if tensor[i][u][v].is_zero() {
                    continue;
                }
                out[v] = &out[v] + &(&(li * ru) * &tensor[i][u][v]);
            }
        }
    }
    out
}

/// Coefficient identity `λ₁(p₁, λ₀(p₂, r₀)) = ν(g(p₁,p₂), r₀)` checked
/// exactly on basis triples.
pub fn validate_truncated_module(r: &TruncatedTriModule, alg: &TrioleAlgebra) -> ValidationReport {
    if r.lambda0.len() != alg.m_p
        || r.lambda1.len() != alg.m_p
        || r.nu.len() != alg.m_q
        || r.lambda0.iter().any(|s| s.len() != r.r0)
        || r.lambda1.iter().any(|s| s.len() != r.r1)
        || r.nu.iter().any(|s| s.len() != r.r0)
    {
        return ValidationReport::fail(Witness::new("module shapes", vec![]));
    }
    for al in 0..alg.m_p {
        for be in 0..alg.m_p {
            for u in 0..r.r0 {
                for w in 0..r.r2 {
                    let mut lhs = Poly::zero(alg.n_vars);
                    for v in 0..r.r1 {
                        lhs = &lhs + &(&r.lambda0[be][u][v] * &r.lambda1[al][v][w]);
                    }
                    let mut rhs = Poly::zero(alg.n_vars);
                    for a in 0..alg.m_q {
                        rhs = &rhs + &(&alg.g[a][al][be] * &r.nu[a][u][w]);
                    }
                    if lhs != rhs {
                        return ValidationReport::fail(Witness::new(
                            "compatibility λ₁∘(id⊗λ₀) = ν∘(g⊗id)",
                            vec![al + 1, be + 1, u + 1],
                        ));
                    }
                }
            }
        }
    }
    ValidationReport::ok()
}

/// Module-valued derivations of 𝒯 (degrees 0, 1, 2) and triolic
/// Der-operators on a truncated module (degrees −1..2, carrying their
/// graded symbol).
#[derive(Debug, Clone)]
pub enum ModuleDerivation {
    /// X^A ∈ D(A,R₀), X^P ∈ Der^{λ₀}(P,R₁), X^Q ∈ Der^ν(Q,R₂).
    ValuedDeg0 {
        xa: MatDiffOp,
        xp: MatDiffOp,
        xq: MatDiffOp,
    },
    /// X^A ∈ D(A,R₁), X^P ∈ Der^{λ₁}(P,R₂).
    ValuedDeg1 { xa: MatDiffOp, xp: MatDiffOp },
    /// R₂-valued derivation of A.
    ValuedDeg2 { xa: MatDiffOp },
    /// Der-operator triple on (R₀,R₁,R₂) with a degree-0 symbol.
    DerOpDeg0 {
        symbol: GradedDerivation,
        d0: MatDiffOp,
        d1: MatDiffOp,
        d2: MatDiffOp,
    },
    /// Pair (R₀→R₁, R₁→R₂) with a degree-1 symbol.
    DerOpDeg1 {
        symbol: GradedDerivation,
        d0: MatDiffOp,
        d1: MatDiffOp,
    },
    /// R₀→R₂ with a degree-2 symbol.
    DerOpDeg2 {
        symbol: GradedDerivation,
        d0: MatDiffOp,
    },
    /// A-linear pair (R₁→R₀, R₂→R₁) with a degree −1 symbol.
    DerOpDegMinus1 {
        symbol: GradedDerivation,
        d1: MatDiffOp,
        d2: MatDiffOp,
    },
}

fn mons(n: usize, d: u32) -> Vec<Poly> {
    monomials_up_to(n, d)
        .into_iter()
        .map(|m| Poly::monomial(n, &m.0, BigRational::from_integer(1.into())))
        .collect()
}

fn unit_vec(n: usize, len: usize, idx: usize, f: &Poly) -> Vec<Poly> {
    let mut v = vec![Poly::zero(n); len];
    v[idx] = f.clone();
    v
}

fn vecs_eq(a: &[Poly], b: &[Poly]) -> bool {
    a.iter().zip(b).all(|(x, y)| x == y)
}

fn vec_add(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_scale(a: &[Poly], f: &Poly) -> Vec<Poly> {
    a.iter().map(|x| x * f).collect()
}

fn vec_scale_int(a: &[Poly], k: i64) -> Vec<Poly> {
    a.iter().map(|x| x.scale_int(k)).collect()
}

/// Is `op` an R-valued derivation of A (order ≤ 1, kills 1, Leibniz)?
fn check_vector_derivation(op: &MatDiffOp, n: usize) -> bool {
    if op.order() > 1 {
        return false;
    }
    let one = vec![Poly::one(n)];
    if !op.apply(&one).iter().all(|p| p.is_zero()) {
        return false;
    }
    for a in mons(n, 2) {
        for b in mons(n, 2) {
            let lhs = op.apply(&[&a * &b]);
            let rhs = vec_add(
                &vec_scale(&op.apply(std::slice::from_ref(&b)), &a),
                &vec_scale(&op.apply(std::slice::from_ref(&a)), &b),
            );
            if !vecs_eq(&lhs, &rhs) {
                return false;
            }
        }
    }
    true
}

fn scalar_matrix(n: usize, size: usize, value: &Poly) -> Vec<Vec<Poly>> {
    (0..size)
        .map(|r| {
            (0..size)
                .map(|c| if r == c { value.clone() } else { Poly::zero(n) })
                .collect()
        })
        .collect()
}

/// Checks the per-degree relations of the module-valued lemmas as exact
/// identities on monomial bases. The sign in the degree-1 twist relation
/// is keyed to the convention (plain: +, koszul: −), fixed by the R = 𝒯
/// specialization.
pub fn validate_module_derivation(
    x: &ModuleDerivation,
    r: &TruncatedTriModule,
    alg: &TrioleAlgebra,
) -> ValidationReport {
    let n = alg.n_vars;
    let odd_sign = match alg.convention {
        Convention::Koszul => -1i64,
        _ => 1i64,
    };
    match x {
        ModuleDerivation::ValuedDeg0 { xa, xp, xq } => {
            if xa.rows != r.r0
                || xp.rows != r.r1
                || xp.cols != alg.m_p
                || xq.rows != r.r2
                || xq.cols != alg.m_q
            {
                return ValidationReport::fail(Witness::new("valued deg-0 shapes", vec![]));
            }
            if !check_vector_derivation(xa, n) {
                return ValidationReport::fail(Witness::new("X^A ∈ D(A,R₀)", vec![]));
            }
            // X^P(a p) = λ₀(p, X^A(a)) + a X^P(p)
            for a in mons(n, 2) {
                for f in mons(n, 1) {
                    for al in 0..alg.m_p {
                        let p = unit_vec(n, alg.m_p, al, &f);
                        let lhs = xp.apply(&vec_scale(&p, &a));
                        let twist = r.lambda0_apply(&p, &xa.apply(std::slice::from_ref(&a)), alg);
                        let rhs = vec_add(&twist, &vec_scale(&xp.apply(&p), &a));
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "X^P λ₀-Leibniz",
                                vec![al + 1],
                            ));
                        }
                    }
                }
            }
            // X^Q(a q) = ν(q, X^A(a)) + a X^Q(q)
            for a in mons(n, 2) {
                for f in mons(n, 1) {
                    for aq in 0..alg.m_q {
                        let q = unit_vec(n, alg.m_q, aq, &f);
                        let lhs = xq.apply(&vec_scale(&q, &a));
                        let twist = r.nu_apply(&q, &xa.apply(std::slice::from_ref(&a)), alg);
                        let rhs = vec_add(&twist, &vec_scale(&xq.apply(&q), &a));
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "X^Q ν-Leibniz",
                                vec![aq + 1],
                            ));
                        }
                    }
                }
            }
            // X^Q(g(p₁,p₂)) = λ₁(p₂, X^P(p₁)) + λ₁(p₁, X^P(p₂))
            for f1 in mons(n, 1) {
                for f2 in mons(n, 1) {
                    for al in 0..alg.m_p {
                        for be in 0..alg.m_p {
                            let p1 = unit_vec(n, alg.m_p, al, &f1);
                            let p2 = unit_vec(n, alg.m_p, be, &f2);
                            let lhs = xq.apply(&alg.metric_apply(&p1, &p2));
                            let rhs = vec_add(
                                &r.lambda1_apply(&p2, &xp.apply(&p1), alg),
                                &r.lambda1_apply(&p1, &xp.apply(&p2), alg),
                            );
                            if !vecs_eq(&lhs, &rhs) {
                                return ValidationReport::fail(Witness::new(
                                    "X^Q on im(g)",
                                    vec![al + 1, be + 1],
                                ));
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        ModuleDerivation::ValuedDeg1 { xa, xp } => {
            if xa.rows != r.r1 || xp.rows != r.r2 || xp.cols != alg.m_p {
                return ValidationReport::fail(Witness::new("valued deg-1 shapes", vec![]));
            }
            if !check_vector_derivation(xa, n) {
                return ValidationReport::fail(Witness::new("X^A ∈ D(A,R₁)", vec![]));
            }
            // X^P(a p) = λ₁(p, X^A(a)) + a X^P(p)
            for a in mons(n, 2) {
                for f in mons(n, 1) {
                    for al in 0..alg.m_p {
                        let p = unit_vec(n, alg.m_p, al, &f);
                        let lhs = xp.apply(&vec_scale(&p, &a));
                        let twist = r.lambda1_apply(&p, &xa.apply(std::slice::from_ref(&a)), alg);
                        let rhs = vec_add(&twist, &vec_scale(&xp.apply(&p), &a));
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "X^P λ₁-Leibniz",
                                vec![al + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        ModuleDerivation::ValuedDeg2 { xa } => {
            if xa.rows != r.r2 {
                return ValidationReport::fail(Witness::new("valued deg-2 shapes", vec![]));
            }
            if !check_vector_derivation(xa, n) {
                return ValidationReport::fail(Witness::new("X^A ∈ D(A,R₂)", vec![]));
            }
            ValidationReport::ok()
        }
        ModuleDerivation::DerOpDeg0 { symbol, d0, d1, d2 } => {
            let GradedDerivation::Deg0 { x_a, .. } = symbol else {
                return ValidationReport::fail(Witness::new("Der-op symbol degree", vec![]));
            };
            // shared scalar symbol: δ_a(d_i) = −X_A(a)·Id
            for (idx, d) in [d0, d1, d2].iter().enumerate() {
                if d.rows != d.cols {
                    return ValidationReport::fail(Witness::new("Der-op square", vec![idx]));
                }
                for a in mons(n, 2) {
                    let delta = d.delta_a(&a).unwrap();
                    let expect = MatDiffOp::from_poly_matrix(&scalar_matrix(
                        n,
                        d.rows,
                        &x_a.apply(&a).scale_int(-1),
                    ));
                    if delta != expect {
                        return ValidationReport::fail(Witness::new(
                            "Der-op shared symbol",
                            vec![idx],
                        ));
                    }
                }
            }
            let xp_sym = symbol.deg0_p_op(alg);
            for f in mons(n, 1) {
                for al in 0..alg.m_p {
                    let p = unit_vec(n, alg.m_p, al, &f);
                    let xpp = xp_sym.apply(&p);
                    // ∇^{R₁}(λ₀(p,r₀)) = λ₀(X₀^P(p), r₀) + λ₀(p, ∇^{R₀}(r₀))
                    for u in 0..r.r0 {
                        for h in mons(n, 1) {
                            let r0 = unit_vec(n, r.r0, u, &h);
                            let lhs = d1.apply(&r.lambda0_apply(&p, &r0, alg));
                            let rhs = vec_add(
                                &r.lambda0_apply(&xpp, &r0, alg),
                                &r.lambda0_apply(&p, &d0.apply(&r0), alg),
                            );
                            if !vecs_eq(&lhs, &rhs) {
                                return ValidationReport::fail(Witness::new(
                                    "Der-op λ₀ relation",
                                    vec![al + 1, u + 1],
                                ));
                            }
                        }
                    }
                    // ∇^{R₂}(λ₁(p,r₁)) = λ₁(X₀^P(p), r₁) + λ₁(p, ∇^{R₁}(r₁))
                    for v in 0..r.r1 {
                        for h in mons(n, 1) {
                            let r1 = unit_vec(n, r.r1, v, &h);
                            let lhs = d2.apply(&r.lambda1_apply(&p, &r1, alg));
                            let rhs = vec_add(
                                &r.lambda1_apply(&xpp, &r1, alg),
                                &r.lambda1_apply(&p, &d1.apply(&r1), alg),
                            );
                            if !vecs_eq(&lhs, &rhs) {
                                return ValidationReport::fail(Witness::new(
                                    "Der-op λ₁ relation",
                                    vec![al + 1, v + 1],
                                ));
                            }
                        }
                    }
                }
            }
            // ∇^{R₂}(ν(g(p₁,p₂), r₀)) = ν([g(X₀^P p₁, p₂) + g(p₁, X₀^P p₂)], r₀)
            //   + ν(g(p₁,p₂), ∇^{R₀} r₀)
            for al in 0..alg.m_p {
                for be in 0..alg.m_p {
                    let p1 = unit_vec(n, alg.m_p, al, &Poly::one(n));
                    let p2 = unit_vec(n, alg.m_p, be, &Poly::one(n));
                    let gval = alg.metric_apply(&p1, &p2);
                    let sym = vec_add(
                        &alg.metric_apply(&xp_sym.apply(&p1), &p2),
                        &alg.metric_apply(&p1, &xp_sym.apply(&p2)),
                    );
                    for u in 0..r.r0 {
                        for h in mons(n, 1) {
                            let r0 = unit_vec(n, r.r0, u, &h);
                            let lhs = d2.apply(&r.nu_apply(&gval, &r0, alg));
                            let rhs = vec_add(
                                &r.nu_apply(&sym, &r0, alg),
                                &r.nu_apply(&gval, &d0.apply(&r0), alg),
                            );
                            if !vecs_eq(&lhs, &rhs) {
                                return ValidationReport::fail(Witness::new(
                                    "Der-op im(g) relation",
                                    vec![al + 1, be + 1, u + 1],
                                ));
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        ModuleDerivation::DerOpDeg1 { symbol, d0, d1 } => {
            let GradedDerivation::Deg1 { xp: sym_xp, .. } = symbol else {
                return ValidationReport::fail(Witness::new("Der-op symbol degree", vec![]));
            };
            // ∇^{R_i}(a r_i) = λ_i(X₁^A(a), r_i) + a ∇^{R_i}(r_i), i = 0, 1
            let xa_op = symbol.deg1_a_op(alg);
            for a in mons(n, 2) {
                let xa_a = xa_op.apply(std::slice::from_ref(&a));
                for u in 0..r.r0 {
                    for h in mons(n, 1) {
                        let r0 = unit_vec(n, r.r0, u, &h);
                        let lhs = d0.apply(&vec_scale(&r0, &a));
                        let rhs = vec_add(
                            &r.lambda0_apply(&xa_a, &r0, alg),
                            &vec_scale(&d0.apply(&r0), &a),
                        );
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "deg-1 Der-op R₀ Leibniz",
                                vec![u + 1],
                            ));
                        }
                    }
                }
                for v in 0..r.r1 {
                    for h in mons(n, 1) {
                        let r1 = unit_vec(n, r.r1, v, &h);
                        let lhs = d1.apply(&vec_scale(&r1, &a));
                        let rhs = vec_add(
                            &r.lambda1_apply(&xa_a, &r1, alg),
                            &vec_scale(&d1.apply(&r1), &a),
                        );
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "deg-1 Der-op R₁ Leibniz",
                                vec![v + 1],
                            ));
                        }
                    }
                }
            }
            // ∇^{R₁}(λ₀(p, r₀)) = ν(X₁^P(p), r₀) ± λ₁(p, ∇^{R₀}(r₀))
            for f in mons(n, 1) {
                for al in 0..alg.m_p {
                    let p = unit_vec(n, alg.m_p, al, &f);
                    let xpp = sym_xp.apply(&p);
                    for u in 0..r.r0 {
                        for h in mons(n, 1) {
                            let r0 = unit_vec(n, r.r0, u, &h);
                            let lhs = d1.apply(&r.lambda0_apply(&p, &r0, alg));
                            let rhs = vec_add(
                                &r.nu_apply(&xpp, &r0, alg),
                                &vec_scale_int(&r.lambda1_apply(&p, &d0.apply(&r0), alg), odd_sign),
                            );
                            if !vecs_eq(&lhs, &rhs) {
                                return ValidationReport::fail(Witness::new(
                                    "deg-1 Der-op twist relation",
                                    vec![al + 1, u + 1],
                                ));
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        ModuleDerivation::DerOpDeg2 { symbol, d0 } => {
            let GradedDerivation::Deg2 { .. } = symbol else {
                return ValidationReport::fail(Witness::new("Der-op symbol degree", vec![]));
            };
            // ∇(a r₀) = ν(X₂^A(a), r₀) + a ∇(r₀)
            let xa_op = symbol.deg2_a_op(alg);
            for a in mons(n, 2) {
                let xa_a = xa_op.apply(std::slice::from_ref(&a));
                for u in 0..r.r0 {
                    for h in mons(n, 1) {
                        let r0 = unit_vec(n, r.r0, u, &h);
                        let lhs = d0.apply(&vec_scale(&r0, &a));
                        let rhs =
                            vec_add(&r.nu_apply(&xa_a, &r0, alg), &vec_scale(&d0.apply(&r0), &a));
                        if !vecs_eq(&lhs, &rhs) {
                            return ValidationReport::fail(Witness::new(
                                "deg-2 Der-op Leibniz",
                                vec![u + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        ModuleDerivation::DerOpDegMinus1 { symbol, d1, d2 } => {
            let GradedDerivation::DegMinus1 { phi, psi } = symbol else {
                return ValidationReport::fail(Witness::new("Der-op symbol degree", vec![]));
            };
            if d1.order() > 0 || d2.order() > 0 {
                return ValidationReport::fail(Witness::new("deg-(−1) Der-op A-linearity", vec![]));
            }
            // ∇^{R₁}(λ₀(p,r₀)) = φ(p)·r₀
            for al in 0..alg.m_p {
                let p = unit_vec(n, alg.m_p, al, &Poly::one(n));
                for u in 0..r.r0 {
                    let r0 = unit_vec(n, r.r0, u, &Poly::one(n));
                    let lhs = d1.apply(&r.lambda0_apply(&p, &r0, alg));
                    let rhs = vec_scale(&r0, &phi[al]);
                    if !vecs_eq(&lhs, &rhs) {
                        return ValidationReport::fail(Witness::new(
                            "deg-(−1) Der-op λ₀ relation",
                            vec![al + 1, u + 1],
                        ));
                    }
                }
            }
            // ∇^{R₂}(λ₁(p,r₁)) = φ(p)·r₁ ± λ₀(p, ∇^{R₁}(r₁))
            for al in 0..alg.m_p {
                let p = unit_vec(n, alg.m_p, al, &Poly::one(n));
                for v in 0..r.r1 {
                    let r1 = unit_vec(n, r.r1, v, &Poly::one(n));
                    let lhs = d2.apply(&r.lambda1_apply(&p, &r1, alg));
                    let rhs = vec_add(
                        &vec_scale(&r1, &phi[al]),
                        &vec_scale_int(&r.lambda0_apply(&p, &d1.apply(&r1), alg), odd_sign),
                    );
                    if !vecs_eq(&lhs, &rhs) {
                        return ValidationReport::fail(Witness::new(
                            "deg-(−1) Der-op λ₁ relation",
                            vec![al + 1, v + 1],
                        ));
                    }
                }
            }
            // ∇^{R₂}(ν(q,r₀)) = λ₀(ψ(q), r₀)
            for aq in 0..alg.m_q {
                let q = unit_vec(n, alg.m_q, aq, &Poly::one(n));
                let psi_q: Vec<Poly> = (0..alg.m_p).map(|ga| psi[ga][aq].clone()).collect();
                for u in 0..r.r0 {
                    let r0 = unit_vec(n, r.r0, u, &Poly::one(n));
                    let lhs = d2.apply(&r.nu_apply(&q, &r0, alg));
                    let rhs = r.lambda0_apply(&psi_q, &r0, alg);
                    if !vecs_eq(&lhs, &rhs) {
                        return ValidationReport::fail(Witness::new(
                            "deg-(−1) Der-op ν relation",
                            vec![aq + 1, u + 1],
                        ));
                    }
                }
            }
            ValidationReport::ok()
        }
    }
}
