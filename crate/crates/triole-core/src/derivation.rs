//! Graded derivations `D₁(𝒯)_g` for g ∈ {−1, 0, 1, 2}: validation
//! against the per-degree defining relations, evaluation, the admissible
//! Lie brackets, symbol maps of the two Atiyah sequences, and the module
//! structure of `D(𝒯)⁺`.

use crate::algebra::{Convention, TrioleAlgebra, TrioleElement};
use crate::diffop::MatDiffOp;
use crate::linalg::RatMat;
use crate::poly::{monomials_up_to, Poly, ScalarDerivation};
use crate::report::{ValidationReport, Witness};
use crate::{CalcError, PolyDiffOp};
use num::{BigRational, Zero};
use serde::Serialize;

/// A homogeneous derivation of the triole algebra, stored in split
/// coordinate form (holonomic global frame on free modules).
#[derive(Debug, Clone, PartialEq)]
pub enum GradedDerivation {
    /// `(X_A, G, H)`: X₀ acts as X_A on A, X_A + G on P, X_A + H on Q.
    Deg0 {
        x_a: ScalarDerivation,
        g_mat: Vec<Vec<Poly>>,
        h_mat: Vec<Vec<Poly>>,
    },
    /// `(X₁^A, X₁^P)`: P-valued derivation of A and a first-order
    /// operator P→Q twisted by g.
    Deg1 {
        x_a1: Vec<ScalarDerivation>,
        xp: MatDiffOp,
    },
    /// Q-valued derivation of A.
    Deg2 { x_a2: Vec<ScalarDerivation> },
    /// `(φ, ψ)`: A-linear maps P→A and Q→P.
    DegMinus1 {
        phi: Vec<Poly>,
        /// ψ[γ][A]: the e_γ-component of ψ(ε_A).
        psi: Vec<Vec<Poly>>,
    },
}

impl GradedDerivation {
    pub fn degree(&self) -> i64 {
        match self {
            GradedDerivation::DegMinus1 { .. } => -1,
            GradedDerivation::Deg0 { .. } => 0,
            GradedDerivation::Deg1 { .. } => 1,
            GradedDerivation::Deg2 { .. } => 2,
        }
    }

    pub fn zero_of_degree(alg: &TrioleAlgebra, degree: i64) -> Result<Self, CalcError> {
        let n = alg.n_vars;
        Ok(match degree {
            -1 => GradedDerivation::DegMinus1 {
                phi: vec![Poly::zero(n); alg.m_p],
                psi: vec![vec![Poly::zero(n); alg.m_q]; alg.m_p],
            },
            0 => GradedDerivation::Deg0 {
                x_a: ScalarDerivation::zero(n),
                g_mat: vec![vec![Poly::zero(n); alg.m_p]; alg.m_p],
                h_mat: vec![vec![Poly::zero(n); alg.m_q]; alg.m_q],
            },
            1 => GradedDerivation::Deg1 {
                x_a1: vec![ScalarDerivation::zero(n); alg.m_p],
                xp: MatDiffOp::zero(n, alg.m_q, alg.m_p),
            },
            2 => GradedDerivation::Deg2 {
                x_a2: vec![ScalarDerivation::zero(n); alg.m_q],
            },
            d => return Err(CalcError::InadmissibleDegrees(d, 0)),
        })
    }

    /// Build the degree-1 derivation determined by its twist `X₁^A` and
    /// order-0 matrix part h (the Leibniz rule fixes everything else):
    /// `xp(f e_β) = g(X₁^A(f), e_β) + f·h_β`.
    pub fn deg1_from_parts(
        alg: &TrioleAlgebra,
        x_a1: Vec<ScalarDerivation>,
        h: Vec<Vec<Poly>>,
    ) -> Self {
        let n = alg.n_vars;
        let xp = MatDiffOp::from_fn(n, alg.m_q, alg.m_p, |b, be| {
            let mut op = PolyDiffOp::mult(&h[b][be]);
            for al in 0..alg.m_p {
                if alg.g[b][al][be].is_zero() {
                    continue;
                }
                op = op.add(&PolyDiffOp::from_derivation(&x_a1[al]).scale_poly(&alg.g[b][al][be]));
            }
            op
        });
        GradedDerivation::Deg1 { x_a1, xp }
    }

    /// Operator of X₀ on P as a matrix operator `X_A·Id + G`.
    pub fn deg0_p_op(&self, alg: &TrioleAlgebra) -> MatDiffOp {
        let GradedDerivation::Deg0 { x_a, g_mat, .. } = self else {
            panic!("deg0_p_op on non-deg0 derivation");
        };
        MatDiffOp::scalar_diag(&PolyDiffOp::from_derivation(x_a), alg.m_p)
            .add(&MatDiffOp::from_poly_matrix(g_mat))
    }

    /// Operator of X₀ on Q as `X_A·Id + H`.
    pub fn deg0_q_op(&self, alg: &TrioleAlgebra) -> MatDiffOp {
        let GradedDerivation::Deg0 { x_a, h_mat, .. } = self else {
            panic!("deg0_q_op on non-deg0 derivation");
        };
        MatDiffOp::scalar_diag(&PolyDiffOp::from_derivation(x_a), alg.m_q)
            .add(&MatDiffOp::from_poly_matrix(h_mat))
    }

    /// `X₁^A` as an m_P×1 operator A → P.
    pub fn deg1_a_op(&self, alg: &TrioleAlgebra) -> MatDiffOp {
        let GradedDerivation::Deg1 { x_a1, .. } = self else {
            panic!("deg1_a_op on non-deg1 derivation");
        };
        MatDiffOp::from_fn(alg.n_vars, alg.m_p, 1, |r, _| {
            PolyDiffOp::from_derivation(&x_a1[r])
        })
    }

    /// `X₂^A` as an m_Q×1 operator A → Q.
    pub fn deg2_a_op(&self, alg: &TrioleAlgebra) -> MatDiffOp {
        let GradedDerivation::Deg2 { x_a2 } = self else {
            panic!("deg2_a_op on non-deg2 derivation");
        };
        MatDiffOp::from_fn(alg.n_vars, alg.m_q, 1, |r, _| {
            PolyDiffOp::from_derivation(&x_a2[r])
        })
    }

    fn degm1_phi_op(&self) -> MatDiffOp {
        let GradedDerivation::DegMinus1 { phi, .. } = self else {
            panic!("degm1_phi_op on wrong degree");
        };
        MatDiffOp::from_poly_matrix(std::slice::from_ref(phi))
    }

    fn degm1_psi_op(&self) -> MatDiffOp {
        let GradedDerivation::DegMinus1 { psi, .. } = self else {
            panic!("degm1_psi_op on wrong degree");
        };
        MatDiffOp::from_poly_matrix(psi)
    }
}

/// Reassemble a Der-shaped matrix operator (first-order part a shared
/// scalar) into `(X_A, matrix)`.
pub fn split_der_op(
    op: &MatDiffOp,
    size: usize,
) -> Result<(ScalarDerivation, Vec<Vec<Poly>>), CalcError> {
    if op.rows != size || op.cols != size {
        return Err(CalcError::ShapeMismatch(
            "Der operator must be square".into(),
        ));
    }
    if op.order() > 1 {
        return Err(CalcError::Invalid("Der operator has order > 1".into()));
    }
    let (x_a, _) = op.entry(0, 0).split_first_order();
    let scalar = MatDiffOp::scalar_diag(&PolyDiffOp::from_derivation(&x_a), size);
    let rest = op.sub(&scalar);
    if rest.order() > 0 {
        return Err(CalcError::Invalid(
            "operator is not Der-shaped (no shared scalar symbol)".into(),
        ));
    }
    Ok((x_a, rest.order0_matrix()))
}

/// Extract a P- or Q-valued derivation of A from an m×1 first-order
/// operator that kills constants.
fn split_vector_derivation(op: &MatDiffOp) -> Result<Vec<ScalarDerivation>, CalcError> {
    let mut out = Vec::with_capacity(op.rows);
    for r in 0..op.rows {
        let (x, c) = op.entry(r, 0).split_first_order();
        if !c.is_zero() {
            return Err(CalcError::Invalid(
                "vector-valued operator does not kill constants".into(),
            ));
        }
        out.push(x);
    }
    Ok(out)
}

/// Checks the per-degree defining relations as exact coefficient
/// identities (monomial bases of degree ≤ order+1 per slot, complete for
/// bounded-order multidifferential identities).
pub fn validate_derivation(x: &GradedDerivation, alg: &TrioleAlgebra) -> ValidationReport {
    let n = alg.n_vars;
    match x {
        GradedDerivation::Deg0 { x_a, g_mat, h_mat } => {
            if x_a.n_vars() != n
                || g_mat.len() != alg.m_p
                || g_mat.iter().any(|r| r.len() != alg.m_p)
                || h_mat.len() != alg.m_q
                || h_mat.iter().any(|r| r.len() != alg.m_q)
            {
                return ValidationReport::fail(Witness::new("deg-0 shapes", vec![]));
            }
            // X_A(g_{αβ}^C) + Σ_B H[C][B] g_{αβ}^B
            //   − Σ_γ (G[γ][α] g_{γβ}^C + G[γ][β] g_{αγ}^C) = 0
            for c in 0..alg.m_q {
                for al in 0..alg.m_p {
                    for be in 0..alg.m_p {
                        let mut res = x_a.apply(&alg.g[c][al][be]);
                        for b in 0..alg.m_q {
                            res = &res + &(&h_mat[c][b] * &alg.g[b][al][be]);
                        }
                        for ga in 0..alg.m_p {
                            res = &res - &(&g_mat[ga][al] * &alg.g[c][ga][be]);
                            res = &res - &(&g_mat[ga][be] * &alg.g[c][al][ga]);
                        }
                        if !res.is_zero() {
                            return ValidationReport::fail(Witness::new(
                                "deg-0 metric compatibility",
                                vec![c + 1, al + 1, be + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        GradedDerivation::Deg1 { x_a1, xp } => {
            if x_a1.len() != alg.m_p || xp.rows != alg.m_q || xp.cols != alg.m_p {
                return ValidationReport::fail(Witness::new("deg-1 shapes", vec![]));
            }
            if xp.order() > 1 {
                return ValidationReport::fail(Witness::new("deg-1 operator order ≤ 1", vec![]));
            }
            // X₁^P(a·p) = g(X₁^A(a), p) + a·X₁^P(p) on monomial slots
            let mons = monomials_up_to(n, 2);
            for am in &mons {
                let a = Poly::monomial(n, &am.0, BigRational::from_integer(1.into()));
                for fm in &mons {
                    let f = Poly::monomial(n, &fm.0, BigRational::from_integer(1.into()));
                    for be in 0..alg.m_p {
                        let mut p = vec![Poly::zero(n); alg.m_p];
                        p[be] = f.clone();
                        let ap: Vec<Poly> = p.iter().map(|c| c * &a).collect();
                        let lhs = xp.apply(&ap);
                        let xa_of_a: Vec<Poly> = x_a1.iter().map(|d| d.apply(&a)).collect();
                        let twist = alg.metric_apply(&xa_of_a, &p);
                        let xp_p = xp.apply(&p);
                        for bq in 0..alg.m_q {
                            let rhs = &twist[bq] + &(&a * &xp_p[bq]);
                            if lhs[bq] != rhs {
                                return ValidationReport::fail(Witness::new(
                                    "deg-1 twisted Leibniz",
                                    vec![bq + 1, be + 1],
                                ));
                            }
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
        GradedDerivation::Deg2 { x_a2 } => {
            if x_a2.len() != alg.m_q || x_a2.iter().any(|d| d.n_vars() != n) {
                return ValidationReport::fail(Witness::new("deg-2 shapes", vec![]));
            }
            ValidationReport::ok()
        }
        GradedDerivation::DegMinus1 { phi, psi } => {
            if phi.len() != alg.m_p
                || psi.len() != alg.m_p
                || psi.iter().any(|r| r.len() != alg.m_q)
            {
                return ValidationReport::fail(Witness::new("deg-(−1) shapes", vec![]));
            }
            // Σ_A ψ[γ][A] g_{αβ}^A = φ_α δ_β^γ − φ_β δ_α^γ
            for ga in 0..alg.m_p {
                for al in 0..alg.m_p {
                    for be in 0..alg.m_p {
                        let mut lhs = Poly::zero(n);
                        for a in 0..alg.m_q {
                            lhs = &lhs + &(&psi[ga][a] * &alg.g[a][al][be]);
                        }
                        let mut rhs = Poly::zero(n);
                        if be == ga {
                            rhs = &rhs + &phi[al];
                        }
                        if al == ga {
                            rhs = &rhs - &phi[be];
                        }
                        if lhs != rhs {
                            return ValidationReport::fail(Witness::new(
                                "deg-(−1) relation",
                                vec![ga + 1, al + 1, be + 1],
                            ));
                        }
                    }
                }
            }
            ValidationReport::ok()
        }
    }
}

/// Report for the degree −2 nonexistence lemma: the linear system forced
/// on the candidate coefficients and its unique zero solution.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeMinus2Report {
    /// Rows of the forced system over the m_Q candidate coefficients.
    pub system: Vec<Vec<i64>>,
    pub only_zero_solution: bool,
    pub nonexistent: bool,
}

/// Expanding the Leibniz rule of a candidate degree −2 derivation on
/// `Q·Q = 0` forces `t_A δ_B^C + t_B δ_A^C = 0` for all A, B, C; the
/// system has full rank, so only the zero derivation exists.
pub fn reject_degree_minus2(alg: &TrioleAlgebra) -> DegreeMinus2Report {
    let mq = alg.m_q;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for a in 0..mq {
        for b in 0..mq {
            for c in 0..mq {
                let mut row = vec![0i64; mq];
                if b == c {
                    row[a] += 1;
                }
                if a == c {
                    row[b] += 1;
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let mut m = RatMat::new(rows.len(), mq);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            *m.at_mut(r, c) = BigRational::from_integer(v.into());
        }
    }
    let only_zero = m.kernel_basis().is_empty();
    DegreeMinus2Report {
        system: rows,
        only_zero_solution: only_zero,
        nonexistent: only_zero,
    }
}

/// Evaluate the derivation on an element; the result is degree-shifted.
pub fn apply_derivation(
    x: &GradedDerivation,
    t: &TrioleElement,
    alg: &TrioleAlgebra,
) -> Result<TrioleElement, CalcError> {
    let n = alg.n_vars;
    if t.p.len() != alg.m_p || t.q.len() != alg.m_q {
        return Err(CalcError::ShapeMismatch("element ranks".into()));
    }
    Ok(match x {
        GradedDerivation::Deg0 { x_a, g_mat, h_mat } => {
            let a = x_a.apply(&t.a);
            let p = (0..alg.m_p)
                .map(|be| {
                    let mut acc = x_a.apply(&t.p[be]);
                    for al in 0..alg.m_p {
                        acc = &acc + &(&g_mat[be][al] * &t.p[al]);
                    }
                    acc
                })
                .collect();
            let q = (0..alg.m_q)
                .map(|bq| {
                    let mut acc = x_a.apply(&t.q[bq]);
                    for aq in 0..alg.m_q {
                        acc = &acc + &(&h_mat[bq][aq] * &t.q[aq]);
                    }
                    acc
                })
                .collect();
            TrioleElement { a, p, q }
        }
        GradedDerivation::Deg1 { x_a1, xp } => TrioleElement {
            a: Poly::zero(n),
            p: x_a1.iter().map(|d| d.apply(&t.a)).collect(),
            q: xp.apply(&t.p),
        },
        GradedDerivation::Deg2 { x_a2 } => TrioleElement {
            a: Poly::zero(n),
            p: vec![Poly::zero(n); alg.m_p],
            q: x_a2.iter().map(|d| d.apply(&t.a)).collect(),
        },
        GradedDerivation::DegMinus1 { phi, psi } => {
            let mut a = Poly::zero(n);
            for (al, c) in phi.iter().enumerate() {
                a = &a + &(c * &t.p[al]);
            }
            let p = (0..alg.m_p)
                .map(|ga| {
                    let mut acc = Poly::zero(n);
                    for aq in 0..alg.m_q {
                        acc = &acc + &(&psi[ga][aq] * &t.q[aq]);
                    }
                    acc
                })
                .collect();
            TrioleElement {
                a,
                p,
                q: vec![Poly::zero(n); alg.m_q],
            }
        }
    })
}

/// Graded Lie bracket on `D(𝒯)`: componentwise commutators of the
/// realizing operators, assembled back into split coordinate form; the
/// odd·odd sign is keyed to the algebra convention.
pub fn bracket(
    x: &GradedDerivation,
    y: &GradedDerivation,
    alg: &TrioleAlgebra,
) -> Result<GradedDerivation, CalcError> {
    let (dx, dy) = (x.degree(), y.degree());
    let total = dx + dy;
    if !(-1..=2).contains(&total) {
        return Err(CalcError::InadmissibleDegrees(dx, dy));
    }
    let sgn = alg.sign(dx, dy);
    match (x, y) {
        (GradedDerivation::Deg0 { x_a: xa, .. }, GradedDerivation::Deg0 { x_a: ya, .. }) => {
            let z_a = xa.commutator(ya);
            let zp = x.deg0_p_op(alg).commutator(&y.deg0_p_op(alg))?;
            let zq = x.deg0_q_op(alg).commutator(&y.deg0_q_op(alg))?;
            let (za_p, g_mat) = split_der_op(&zp, alg.m_p)?;
            let (za_q, h_mat) = split_der_op(&zq, alg.m_q)?;
            debug_assert_eq!(za_p, z_a);
            debug_assert_eq!(za_q, z_a);
            Ok(GradedDerivation::Deg0 {
                x_a: z_a,
                g_mat,
                h_mat,
            })
        }
        (GradedDerivation::Deg0 { x_a: xa, .. }, GradedDerivation::Deg1 { xp: y_xp, .. }) => {
            // Z₁^A = X₀^P∘Y₁^A − Y₁^A∘X₀^A ; Z₁^P = X₀^Q∘Y₁^P − Y₁^P∘X₀^P
            let xa_op =
                MatDiffOp::from_fn(alg.n_vars, 1, 1, |_, _| PolyDiffOp::from_derivation(xa));
            let z_a_op = x
                .deg0_p_op(alg)
                .compose(&y.deg1_a_op(alg))?
                .sub(&y.deg1_a_op(alg).compose(&xa_op)?);
            let x_a1 = split_vector_derivation(&z_a_op)?;
            let xp = x
                .deg0_q_op(alg)
                .compose(y_xp)?
                .sub(&y_xp.compose(&x.deg0_p_op(alg))?);
            Ok(GradedDerivation::Deg1 { x_a1, xp })
        }
        (GradedDerivation::Deg0 { x_a: xa, .. }, GradedDerivation::Deg2 { .. }) => {
            // Z₂^A = X₀^Q∘Y₂^A − Y₂^A∘X₀^A
            let xa_op =
                MatDiffOp::from_fn(alg.n_vars, 1, 1, |_, _| PolyDiffOp::from_derivation(xa));
            let z = x
                .deg0_q_op(alg)
                .compose(&y.deg2_a_op(alg))?
                .sub(&y.deg2_a_op(alg).compose(&xa_op)?);
            Ok(GradedDerivation::Deg2 {
                x_a2: split_vector_derivation(&z)?,
            })
        }
        (GradedDerivation::Deg0 { x_a: xa, .. }, GradedDerivation::DegMinus1 { .. }) => {
            // φ_Z = X₀^A∘φ − φ∘X₀^P ; ψ_Z = X₀^P∘ψ − ψ∘X₀^Q
            let xa_op =
                MatDiffOp::from_fn(alg.n_vars, 1, 1, |_, _| PolyDiffOp::from_derivation(xa));
            let phi_y = y.degm1_phi_op();
            let psi_y = y.degm1_psi_op();
            let phi_op = xa_op
                .compose(&phi_y)?
                .sub(&phi_y.compose(&x.deg0_p_op(alg))?);
            let psi_op = x
                .deg0_p_op(alg)
                .compose(&psi_y)?
                .sub(&psi_y.compose(&x.deg0_q_op(alg))?);
            if phi_op.order() > 0 || psi_op.order() > 0 {
                return Err(CalcError::Invalid("bracket output not A-linear".into()));
            }
            Ok(GradedDerivation::DegMinus1 {
                phi: phi_op.order0_matrix().remove(0),
                psi: psi_op.order0_matrix(),
            })
        }
        (GradedDerivation::Deg1 { xp: x_xp, .. }, GradedDerivation::Deg1 { xp: y_xp, .. }) => {
            // Z₂^A = X₁^P∘Y₁^A − sgn·Y₁^P∘X₁^A
            let z = x_xp
                .compose(&y.deg1_a_op(alg))?
                .sub(&y_xp.compose(&x.deg1_a_op(alg))?.scale_int(sgn));
            Ok(GradedDerivation::Deg2 {
                x_a2: split_vector_derivation(&z)?,
            })
        }
        (GradedDerivation::Deg1 { xp, .. }, GradedDerivation::DegMinus1 { .. }) => {
            // degree 0: Z_A = −sgn·φ_Y∘X₁^A,
            // Z_P = X₁^A∘φ_Y − sgn·ψ_Y∘X₁^P, Z_Q = X₁^P∘ψ_Y
            let phi_y = y.degm1_phi_op();
            let psi_y = y.degm1_psi_op();
            let z_a_op = phi_y.compose(&x.deg1_a_op(alg))?.scale_int(-sgn);
            let (z_a, c) = z_a_op.entry(0, 0).split_first_order();
            if !c.is_zero() {
                return Err(CalcError::Invalid(
                    "bracket symbol has constant term".into(),
                ));
            }
            let zp = x
                .deg1_a_op(alg)
                .compose(&phi_y)?
                .sub(&psi_y.compose(xp)?.scale_int(sgn));
            let zq = xp.compose(&psi_y)?;
            let (za_p, g_mat) = split_der_op(&zp, alg.m_p)?;
            let (za_q, h_mat) = split_der_op(&zq, alg.m_q)?;
            debug_assert_eq!(za_p, z_a);
            debug_assert_eq!(za_q, z_a);
            Ok(GradedDerivation::Deg0 {
                x_a: z_a,
                g_mat,
                h_mat,
            })
        }
        (GradedDerivation::Deg2 { .. }, GradedDerivation::DegMinus1 { .. }) => {
            // degree 1: Z₁^A = −ψ_Y∘X₂^A, Z₁^P = X₂^A∘φ_Y
            let phi_y = y.degm1_phi_op();
            let psi_y = y.degm1_psi_op();
            let z_a_op = psi_y.compose(&x.deg2_a_op(alg))?.scale_int(-1);
            let x_a1 = split_vector_derivation(&z_a_op)?;
            let xp = x.deg2_a_op(alg).compose(&phi_y)?;
            Ok(GradedDerivation::Deg1 { x_a1, xp })
        }
        // remaining orientations via graded antisymmetry
        _ => {
            let rev = bracket(y, x, alg)?;
            Ok(negate(&rev, -sgn))
        }
    }
}

fn negate(x: &GradedDerivation, factor: i64) -> GradedDerivation {
    if factor == 1 {
        return x.clone();
    }
    match x {
        GradedDerivation::Deg0 { x_a, g_mat, h_mat } => GradedDerivation::Deg0 {
            x_a: ScalarDerivation::new(x_a.coeffs.iter().map(|c| c.scale_int(factor)).collect()),
            g_mat: g_mat
                .iter()
                .map(|r| r.iter().map(|c| c.scale_int(factor)).collect())
                .collect(),
            h_mat: h_mat
                .iter()
                .map(|r| r.iter().map(|c| c.scale_int(factor)).collect())
                .collect(),
        },
        GradedDerivation::Deg1 { x_a1, xp } => GradedDerivation::Deg1 {
            x_a1: x_a1
                .iter()
                .map(|d| {
                    ScalarDerivation::new(d.coeffs.iter().map(|c| c.scale_int(factor)).collect())
                })
                .collect(),
            xp: xp.scale_int(factor),
        },
        GradedDerivation::Deg2 { x_a2 } => GradedDerivation::Deg2 {
            x_a2: x_a2
                .iter()
                .map(|d| {
                    ScalarDerivation::new(d.coeffs.iter().map(|c| c.scale_int(factor)).collect())
                })
                .collect(),
        },
        GradedDerivation::DegMinus1 { phi, psi } => GradedDerivation::DegMinus1 {
            phi: phi.iter().map(|c| c.scale_int(factor)).collect(),
            psi: psi
                .iter()
                .map(|r| r.iter().map(|c| c.scale_int(factor)).collect())
                .collect(),
        },
    }
}

/// σ₀¹: projection of a degree-0 derivation onto its scalar symbol.
pub fn symbol_deg0(x: &GradedDerivation) -> ScalarDerivation {
    let GradedDerivation::Deg0 { x_a, .. } = x else {
        panic!("symbol_deg0 needs a degree-0 derivation");
    };
    x_a.clone()
}

/// Residual of the End(g;P,Q) relation for a symbol-zero pair (G, H):
/// `H(g(p₁,p₂)) − g(Gp₁,p₂) − g(p₁,Gp₂)` coefficientwise.
pub fn end_pair_residual(
    g_mat: &[Vec<Poly>],
    h_mat: &[Vec<Poly>],
    alg: &TrioleAlgebra,
) -> Vec<Poly> {
    let n = alg.n_vars;
    let mut out = Vec::new();
    for c in 0..alg.m_q {
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                let mut res = Poly::zero(n);
                for b in 0..alg.m_q {
                    res = &res + &(&h_mat[c][b] * &alg.g[b][al][be]);
                }
                for ga in 0..alg.m_p {
                    res = &res - &(&g_mat[ga][al] * &alg.g[c][ga][be]);
                    res = &res - &(&g_mat[ga][be] * &alg.g[c][al][ga]);
                }
                out.push(res);
            }
        }
    }
    out
}

/// σ₁¹ in coordinates: n matrices `M_i = g♯(X₁^A(xᵢ))` of shape m_Q×m_P.
/// Requires a nondegenerate metric.
pub fn symbol_deg1(
    x: &GradedDerivation,
    alg: &TrioleAlgebra,
) -> Result<Vec<Vec<Vec<Poly>>>, CalcError> {
    let GradedDerivation::Deg1 { x_a1, .. } = x else {
        return Err(CalcError::Invalid("symbol_deg1 needs degree 1".into()));
    };
    if !crate::algebra::is_nondegenerate(alg) {
        return Err(CalcError::DegenerateMetric);
    }
    let n = alg.n_vars;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = vec![vec![Poly::zero(n); alg.m_p]; alg.m_q];
        for b in 0..alg.m_q {
            for be in 0..alg.m_p {
                for al in 0..alg.m_p {
                    m[b][be] = &m[b][be] + &(&x_a1[al].coeffs[i] * &alg.g[b][al][be]);
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Left 𝒯-module structure on `D(𝒯)⁺`: λ₀(p, X₀), λ₁(p, X₁), ν(q, X₀).
/// `s_degree` (1 or 2) states which homogeneous component of `s` acts;
/// the zero element is homogeneous of every degree, so the caller must
/// say which map is meant.
pub fn module_action(
    s: &TrioleElement,
    s_degree: i64,
    x: &GradedDerivation,
    alg: &TrioleAlgebra,
) -> Result<GradedDerivation, CalcError> {
    let s_pure_p = s_degree == 1 && s.a.is_zero() && s.q.iter().all(|c| c.is_zero());
    let s_pure_q = s_degree == 2 && s.a.is_zero() && s.p.iter().all(|c| c.is_zero());
    match (x, s_pure_p, s_pure_q) {
        (GradedDerivation::Deg0 { x_a, .. }, true, _) => {
            // λ₀(p, X₀): degree 1 with (pX₀)^A(a) = p·X_A(a),
            // (pX₀)^P = g♯(p) ∘ X₀^P
            let x_a1 = s.p.iter().map(|c| x_a.scale(c)).collect();
            let gp_rows: Vec<Vec<Poly>> = (0..alg.m_q)
                .map(|b| {
                    (0..alg.m_p)
                        .map(|ga| {
                            let mut acc = Poly::zero(alg.n_vars);
                            for al in 0..alg.m_p {
                                acc = &acc + &(&s.p[al] * &alg.g[b][al][ga]);
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let xp = MatDiffOp::from_poly_matrix(&gp_rows).compose(&x.deg0_p_op(alg))?;
            Ok(GradedDerivation::Deg1 { x_a1, xp })
        }
        (GradedDerivation::Deg1 { x_a1, .. }, true, _) => {
            // λ₁(p, X₁): degree 2 with (pX₁)(a) = g(p, X₁^A(a))
            let n = alg.n_vars;
            let x_a2 = (0..alg.m_q)
                .map(|b| {
                    let coeffs = (0..n)
                        .map(|i| {
                            let mut acc = Poly::zero(n);
                            for al in 0..alg.m_p {
                                for be in 0..alg.m_p {
                                    acc = &acc
                                        + &(&(&s.p[al] * &alg.g[b][al][be]) * &x_a1[be].coeffs[i]);
                                }
                            }
                            acc
                        })
                        .collect();
                    ScalarDerivation::new(coeffs)
                })
                .collect();
            Ok(GradedDerivation::Deg2 { x_a2 })
        }
        (GradedDerivation::Deg0 { x_a, .. }, _, true) => {
            // ν(q, X₀): degree 2 with (qX₀)(a) = q·X_A(a)
            let x_a2 = s.q.iter().map(|c| x_a.scale(c)).collect();
            Ok(GradedDerivation::Deg2 { x_a2 })
        }
        _ => Err(CalcError::InadmissibleDegrees(x.degree(), 9)),
    }
}

/// Solve `Σ_A ψ[γ][A] g_{αβ}^A = φ_α δ_β^γ − φ_β δ_α^γ` for ψ with
/// polynomial entries of degree ≤ deg_bound; `None` when inconsistent.
pub fn solve_deg_minus1_psi(
    alg: &TrioleAlgebra,
    phi: &[Poly],
    deg_bound: u32,
) -> Option<Vec<Vec<Poly>>> {
    let n = alg.n_vars;
    let unk_mons = monomials_up_to(n, deg_bound);
    let max_deg = deg_bound
        + alg
            .g
            .iter()
            .flatten()
            .flatten()
            .map(|p| p.total_degree())
            .max()
            .unwrap_or(0)
        + phi.iter().map(|p| p.total_degree()).max().unwrap_or(0);
    let eq_mons = monomials_up_to(n, max_deg);
    let n_unknowns = alg.m_p * alg.m_q * unk_mons.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for ga in 0..alg.m_p {
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                let mut target = Poly::zero(n);
                if be == ga {
                    target = &target + &phi[al];
                }
                if al == ga {
                    target = &target - &phi[be];
                }
                for em in &eq_mons {
                    let mut row = vec![BigRational::zero(); n_unknowns];
                    for a in 0..alg.m_q {
                        for (mi, um) in unk_mons.iter().enumerate() {
                            if um.divides(em) {
                                let c = alg.g[a][al][be].coeff(&em.div(um));
                                if !c.is_zero() {
                                    row[(ga * alg.m_q + a) * unk_mons.len() + mi] = c;
                                }
                            }
                        }
                    }
                    rows.push(row);
                    rhs.push(target.coeff(em));
                }
            }
        }
    }
    let mut m = RatMat::new(rows.len(), n_unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                *m.at_mut(r, c) = v.clone();
            }
        }
    }
    let sol = m.solve(&rhs)?;
    let mut psi = vec![vec![Poly::zero(n); alg.m_q]; alg.m_p];
    for ga in 0..alg.m_p {
        for a in 0..alg.m_q {
            let mut p = Poly::zero(n);
            for (mi, um) in unk_mons.iter().enumerate() {
                let c = sol[(ga * alg.m_q + a) * unk_mons.len() + mi].clone();
                if !c.is_zero() {
                    p = &p + &Poly::monomial(n, &um.0, c);
                }
            }
            psi[ga][a] = p;
        }
    }
    Some(psi)
}

/// Leibniz sign for `apply(X, t₁·t₂)`: Koszul `(−1)^{|X||t₁|}` under the
/// koszul convention, +1 otherwise.
pub fn leibniz_sign(alg: &TrioleAlgebra, x_deg: i64, t1_deg: i64) -> i64 {
    match alg.convention {
        Convention::Koszul => alg.sign(x_deg, t1_deg),
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::multiply;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn skew_deg0(alg: &TrioleAlgebra, x_a: ScalarDerivation) -> GradedDerivation {
        // identity metric: X_A arbitrary, G skew, H = 0 is valid
        let n = alg.n_vars;
        let mut g_mat = vec![vec![Poly::zero(n); alg.m_p]; alg.m_p];
        g_mat[0][1] = x(n, 0);
        g_mat[1][0] = -&x(n, 0);
        GradedDerivation::Deg0 {
            x_a,
            g_mat,
            h_mat: vec![vec![Poly::zero(n); alg.m_q]; alg.m_q],
        }
    }

    #[test]
    fn deg0_skew_valid_on_identity_metric() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let d = skew_deg0(&alg, ScalarDerivation::partial(2, 0));
        assert!(validate_derivation(&d, &alg).valid);
    }

    #[test]
    fn deg0_symmetric_g_matrix_invalid() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let n = 2;
        let mut g_mat = vec![vec![Poly::zero(n); 2]; 2];
        g_mat[0][0] = Poly::one(n);
        let d = GradedDerivation::Deg0 {
            x_a: ScalarDerivation::zero(n),
            g_mat,
            h_mat: vec![vec![Poly::zero(n)]],
        };
        assert!(!validate_derivation(&d, &alg).valid);
    }

    #[test]
    fn deg2_unconstrained() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let d = GradedDerivation::Deg2 {
            x_a2: vec![ScalarDerivation::new(vec![x(2, 0), x(2, 1)])],
        };
        assert!(validate_derivation(&d, &alg).valid);
    }

    #[test]
    fn deg1_constructor_produces_valid() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let x_a1 = vec![
            ScalarDerivation::partial(2, 0),
            ScalarDerivation::new(vec![x(2, 1), Poly::zero(2)]),
        ];
        let h = vec![vec![x(2, 0), Poly::one(2)]];
        let d = GradedDerivation::deg1_from_parts(&alg, x_a1, h);
        assert!(validate_derivation(&d, &alg).valid);
    }

    #[test]
    fn deg_minus1_solvability() {
        // identity metric rigidity: φ = (1,0) admits no ψ
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let phi = vec![Poly::one(2), Poly::zero(2)];
        assert!(solve_deg_minus1_psi(&alg, &phi, 1).is_none());
        // alternating metric: ψ = (−φ₂, φ₁) works
        let alt = TrioleAlgebra::alternating_rank2(2);
        let psi = solve_deg_minus1_psi(&alt, &phi, 1).expect("solvable");
        let d = GradedDerivation::DegMinus1 { phi, psi };
        assert!(validate_derivation(&d, &alt).valid);
    }

    #[test]
    fn reject_deg_minus2_all_ranks() {
        for m_q in 1..=3 {
            let g = vec![vec![vec![Poly::one(1)]]; m_q];
            let alg = TrioleAlgebra::new(1, 1, m_q, g, Convention::None).unwrap();
            let rep = reject_degree_minus2(&alg);
            assert!(rep.only_zero_solution);
            assert!(rep.nonexistent);
            if m_q == 1 {
                assert_eq!(rep.system, vec![vec![2]]);
            }
        }
    }

    #[test]
    fn apply_deg0_on_pure_a() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let d = skew_deg0(&alg, ScalarDerivation::partial(2, 0));
        let t = TrioleElement::from_a(&alg, &x(2, 0) * &x(2, 0));
        let out = apply_derivation(&d, &t, &alg).unwrap();
        assert_eq!(out.a, x(2, 0).scale_int(2));
    }

    #[test]
    fn graded_leibniz_plain() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let derivs = vec![
            skew_deg0(&alg, ScalarDerivation::partial(2, 0)),
            GradedDerivation::deg1_from_parts(
                &alg,
                vec![ScalarDerivation::partial(2, 0), ScalarDerivation::zero(2)],
                vec![vec![x(2, 1), Poly::zero(2)]],
            ),
            GradedDerivation::Deg2 {
                x_a2: vec![ScalarDerivation::new(vec![x(2, 0), Poly::one(2)])],
            },
        ];
        let elems = vec![
            (
                0i64,
                TrioleElement::from_a(&alg, &x(2, 0) + &Poly::from_int(2, 2)),
            ),
            (1, TrioleElement::from_p(&alg, vec![x(2, 1), Poly::one(2)])),
            (2, TrioleElement::from_q(&alg, vec![&x(2, 0) * &x(2, 1)])),
        ];
        for d in &derivs {
            assert!(validate_derivation(d, &alg).valid);
            for (d1, t1) in &elems {
                for (_d2, t2) in &elems {
                    let prod = multiply(t1, t2, &alg).unwrap();
                    let lhs = apply_derivation(d, &prod, &alg).unwrap();
                    let sign = leibniz_sign(&alg, d.degree(), *d1);
                    let term1 =
                        multiply(&apply_derivation(d, t1, &alg).unwrap(), t2, &alg).unwrap();
                    let term2 =
                        multiply(t1, &apply_derivation(d, t2, &alg).unwrap(), &alg).unwrap();
                    let rhs = term1.add(&term2.scale_int(sign));
                    assert!(lhs.sub(&rhs).is_zero(), "Leibniz fails at degree {}", d1);
                }
            }
        }
    }

    #[test]
    fn graded_leibniz_koszul() {
        let alg = TrioleAlgebra::alternating_rank2(2);
        // deg-1 derivation over the alternating metric
        let d = GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::partial(2, 0), ScalarDerivation::zero(2)],
            vec![vec![x(2, 0), Poly::one(2)]],
        );
        assert!(validate_derivation(&d, &alg).valid);
        // deg-(−1) derivation: φ = (1,0), ψ from the exact solve
        let phi = vec![Poly::one(2), Poly::zero(2)];
        let psi = solve_deg_minus1_psi(&alg, &phi, 1).unwrap();
        let dm1 = GradedDerivation::DegMinus1 { phi, psi };
        assert!(validate_derivation(&dm1, &alg).valid);
        let elems = vec![
            (0i64, TrioleElement::from_a(&alg, x(2, 0))),
            (1, TrioleElement::from_p(&alg, vec![x(2, 1), Poly::one(2)])),
            (2, TrioleElement::from_q(&alg, vec![x(2, 0)])),
        ];
        for der in [&d, &dm1] {
            for (d1, t1) in &elems {
                for (_d2, t2) in &elems {
                    let prod = multiply(t1, t2, &alg).unwrap();
                    let lhs = apply_derivation(der, &prod, &alg).unwrap();
                    let sign = leibniz_sign(&alg, der.degree(), *d1);
                    let term1 =
                        multiply(&apply_derivation(der, t1, &alg).unwrap(), t2, &alg).unwrap();
                    let term2 =
                        multiply(t1, &apply_derivation(der, t2, &alg).unwrap(), &alg).unwrap();
                    let rhs = term1.add(&term2.scale_int(sign));
                    assert!(
                        lhs.sub(&rhs).is_zero(),
                        "Koszul Leibniz fails: |X|={} |t1|={}",
                        der.degree(),
                        d1
                    );
                }
            }
        }
    }

    #[test]
    fn bracket_deg0_deg0_example() {
        // X_A = ∂1, Y_A = x1∂1, G = H = 0 → Z_A = ∂1
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let zero_g = vec![vec![Poly::zero(2); 2]; 2];
        let zero_h = vec![vec![Poly::zero(2)]];
        let x0 = GradedDerivation::Deg0 {
            x_a: ScalarDerivation::partial(2, 0),
            g_mat: zero_g.clone(),
            h_mat: zero_h.clone(),
        };
        let y0 = GradedDerivation::Deg0 {
            x_a: ScalarDerivation::partial(2, 0).scale(&x(2, 0)),
            g_mat: zero_g,
            h_mat: zero_h,
        };
        let z = bracket(&x0, &y0, &alg).unwrap();
        let GradedDerivation::Deg0 { x_a, g_mat, h_mat } = &z else {
            panic!()
        };
        assert_eq!(*x_a, ScalarDerivation::partial(2, 0));
        assert!(g_mat.iter().flatten().all(|p| p.is_zero()));
        assert!(h_mat.iter().flatten().all(|p| p.is_zero()));
        // [X0, X0] = 0
        let self_bracket = bracket(&x0, &x0, &alg).unwrap();
        assert!(symbol_deg0(&self_bracket).is_zero());
    }

    #[test]
    fn bracket_deg0_deg2_example() {
        // X₀ with X_A = ∂1 only; Y₂ = x1∂2 → Z₂ = ∂2
        let alg = TrioleAlgebra::identity_metric(2, 1);
        let x0 = GradedDerivation::Deg0 {
            x_a: ScalarDerivation::partial(2, 0),
            g_mat: vec![vec![Poly::zero(2)]],
            h_mat: vec![vec![Poly::zero(2)]],
        };
        let y2 = GradedDerivation::Deg2 {
            x_a2: vec![ScalarDerivation::partial(2, 1).scale(&x(2, 0))],
        };
        let z = bracket(&x0, &y2, &alg).unwrap();
        let GradedDerivation::Deg2 { x_a2 } = &z else {
            panic!()
        };
        assert_eq!(x_a2[0], ScalarDerivation::partial(2, 1));
    }

    #[test]
    fn bracket_matches_evaluation_commutator() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let x0 = skew_deg0(&alg, ScalarDerivation::partial(2, 0));
        let y1 = GradedDerivation::deg1_from_parts(
            &alg,
            vec![
                ScalarDerivation::partial(2, 1),
                ScalarDerivation::new(vec![Poly::zero(2), x(2, 0)]),
            ],
            vec![vec![Poly::one(2), x(2, 1)]],
        );
        let z = bracket(&x0, &y1, &alg).unwrap();
        assert!(validate_derivation(&z, &alg).valid);
        let elems = vec![
            TrioleElement::from_a(&alg, &x(2, 0) * &x(2, 1)),
            TrioleElement::from_p(&alg, vec![x(2, 1), &x(2, 0) + &Poly::one(2)]),
            TrioleElement::from_q(&alg, vec![x(2, 0)]),
        ];
        for t in &elems {
            let lhs = apply_derivation(&z, t, &alg).unwrap();
            let xy = apply_derivation(&x0, &apply_derivation(&y1, t, &alg).unwrap(), &alg).unwrap();
            let yx = apply_derivation(&y1, &apply_derivation(&x0, t, &alg).unwrap(), &alg).unwrap();
            assert!(lhs.sub(&xy.sub(&yx)).is_zero());
        }
    }

    #[test]
    fn deg0_kernel_pairs_satisfy_end_relation() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let n = 2;
        let mut g_mat = vec![vec![Poly::zero(n); 2]; 2];
        g_mat[0][1] = &x(n, 0) + &x(n, 1);
        g_mat[1][0] = -&g_mat[0][1];
        let d = GradedDerivation::Deg0 {
            x_a: ScalarDerivation::zero(n),
            g_mat: g_mat.clone(),
            h_mat: vec![vec![Poly::zero(n)]],
        };
        assert!(validate_derivation(&d, &alg).valid);
        assert!(symbol_deg0(&d).is_zero());
        let res = end_pair_residual(&g_mat, &[vec![Poly::zero(n)]], &alg);
        assert!(res.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn symbol_deg1_and_kernel() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        // X_A1 = (∂1, 0): matrices pick the first basis column
        let d = GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::partial(2, 0), ScalarDerivation::zero(2)],
            vec![vec![Poly::zero(2); 2]],
        );
        let m = symbol_deg1(&d, &alg).unwrap();
        assert_eq!(m[0][0][0], Poly::one(2));
        assert!(m[0][0][1].is_zero());
        assert!(m[1].iter().flatten().all(|p| p.is_zero()));
        // zero twist: symbol zero, xp is A-linear
        let d0 = GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::zero(2); 2],
            vec![vec![x(2, 0), Poly::one(2)]],
        );
        let m0 = symbol_deg1(&d0, &alg).unwrap();
        assert!(m0.iter().flatten().flatten().all(|p| p.is_zero()));
        let GradedDerivation::Deg1 { xp, .. } = &d0 else {
            panic!()
        };
        assert_eq!(xp.order(), 0);
        // degenerate metric errors
        let degen = TrioleAlgebra::new(
            2,
            2,
            1,
            vec![vec![vec![Poly::zero(2); 2]; 2]],
            Convention::Plain,
        )
        .unwrap();
        assert!(matches!(
            symbol_deg1(&d, &degen),
            Err(CalcError::DegenerateMetric)
        ));
    }

    #[test]
    fn module_action_examples() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        // λ₁(e1, X₁ with X_A1 = (∂1, 0)) → deg-2 derivation ∂1 in slot A
        let x1 = GradedDerivation::deg1_from_parts(
            &alg,
            vec![ScalarDerivation::partial(2, 0), ScalarDerivation::zero(2)],
            vec![vec![Poly::zero(2); 2]],
        );
        let e1 = TrioleElement::from_p(&alg, alg.p_basis(0));
        let z = module_action(&e1, 1, &x1, &alg).unwrap();
        let GradedDerivation::Deg2 { x_a2 } = &z else {
            panic!()
        };
        assert_eq!(x_a2[0], ScalarDerivation::partial(2, 0));
        // ν(q, X₀) = q·X_A
        let x0 = skew_deg0(&alg, ScalarDerivation::partial(2, 1));
        let q = TrioleElement::from_q(&alg, vec![x(2, 0)]);
        let z2 = module_action(&q, 2, &x0, &alg).unwrap();
        let GradedDerivation::Deg2 { x_a2 } = &z2 else {
            panic!()
        };
        assert_eq!(x_a2[0], ScalarDerivation::partial(2, 1).scale(&x(2, 0)));
    }

    #[test]
    fn module_compatibility_lambda1_lambda0_nu() {
        // λ₁(p₁, λ₀(p₂, X₀)) = ν(g(p₁,p₂), X₀) on basis pairs
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let x0 = skew_deg0(&alg, ScalarDerivation::partial(2, 0));
        for al in 0..2 {
            for be in 0..2 {
                let p1 = TrioleElement::from_p(&alg, alg.p_basis(al));
                let p2 = TrioleElement::from_p(&alg, alg.p_basis(be));
                let lam0 = module_action(&p2, 1, &x0, &alg).unwrap();
                let lhs = module_action(&p1, 1, &lam0, &alg).unwrap();
                let gval = alg.metric_apply(&p1.p, &p2.p);
                let qelt = TrioleElement::from_q(&alg, gval);
                let rhs = module_action(&qelt, 2, &x0, &alg).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn inadmissible_bracket_degrees_rejected() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let d2 = GradedDerivation::Deg2 {
            x_a2: vec![ScalarDerivation::partial(2, 0)],
        };
        assert!(matches!(
            bracket(&d2, &d2, &alg),
            Err(CalcError::InadmissibleDegrees(2, 2))
        ));
        let dm1 = GradedDerivation::zero_of_degree(&alg, -1).unwrap();
        assert!(matches!(
            bracket(&dm1, &dm1, &alg),
            Err(CalcError::InadmissibleDegrees(-1, -1))
        ));
    }
}
