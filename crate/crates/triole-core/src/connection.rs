//! Triolic connections: Christoffel data (Γ, Υ), metric compatibility,
//! curvature and flatness, induced connections on derived modules,
//! inner-structure preservation and symmetry algebras.
//!
//! Coordinate frame is holonomic (`[∂ᵢ,∂ⱼ] = 0`), so all structure
//! constants `c_ij^k` vanish and the curvature formulas carry no
//! c-terms.

use crate::algebra::TrioleAlgebra;
use crate::linalg::{PolyMatrix, RatMat};
use crate::poly::{monomials_up_to, Poly};
use crate::report::{ValidationReport, Witness};
use crate::CalcError;
use num::{BigRational, Zero};
use serde::Serialize;

/// Connection coefficients. `gamma[i][β][α] = Γ_{iα}^β` acts on P by
/// `(∇ᵢp)^β = ∂ᵢp^β + Γ_{iα}^β p^α`; `upsilon[i][B][A] = Υ_{iA}^B`
/// likewise on Q.
#[derive(Debug, Clone, PartialEq)]
pub struct TriConnection {
    pub gamma: Vec<Vec<Vec<Poly>>>,
    pub upsilon: Vec<Vec<Vec<Poly>>>,
}

impl TriConnection {
    pub fn zero(n_vars: usize, m_p: usize, m_q: usize) -> Self {
        TriConnection {
            gamma: vec![vec![vec![Poly::zero(n_vars); m_p]; m_p]; n_vars],
            upsilon: vec![vec![vec![Poly::zero(n_vars); m_q]; m_q]; n_vars],
        }
    }

    /// Pure-gauge connection Γᵢ = S⁻¹ ∂ᵢS (zero Υ).
    pub fn pure_gauge(s: &PolyMatrix, m_q: usize) -> Result<Self, CalcError> {
        let n = s.n_vars();
        let s_inv = s.inverse_unit_det()?;
        let mut gamma = Vec::with_capacity(n);
        for i in 0..n {
            let mut ds = PolyMatrix::new(n, s.rows, s.cols);
            for r in 0..s.rows {
                for c in 0..s.cols {
                    *ds.entry_mut(r, c) = s.entry(r, c).partial_derivative(i)?;
                }
            }
            let gi = s_inv.mat_mul(&ds);
            gamma.push(
                (0..s.rows)
                    .map(|r| (0..s.cols).map(|c| gi.entry(r, c).clone()).collect())
                    .collect(),
            );
        }
        Ok(TriConnection {
            gamma,
            upsilon: vec![vec![vec![Poly::zero(n); m_q]; m_q]; n],
        })
    }

    pub fn n_vars(&self) -> usize {
        self.gamma.len()
    }

    pub fn m_p(&self) -> usize {
        self.gamma.first().map(|m| m.len()).unwrap_or(0)
    }

    pub fn m_q(&self) -> usize {
        self.upsilon.first().map(|m| m.len()).unwrap_or(0)
    }

    /// ∇ᵢ on a P-section.
    pub fn nabla_p(&self, i: usize, p: &[Poly]) -> Vec<Poly> {
        let n = self.n_vars();
        (0..p.len())
            .map(|be| {
                let mut acc = p[be].partial_derivative(i).unwrap();
                for al in 0..p.len() {
                    acc = &acc + &(&self.gamma[i][be][al] * &p[al]);
                }
                let _ = n;
                acc
            })
            .collect()
    }
}

/// Per (i, α, β, B): `∂ᵢ(g_{αβ}^B) + Σ_A g_{αβ}^A Υ_{iA}^B −
/// Σ_γ (g_{γβ}^B Γ_{iα}^γ + g_{αγ}^B Γ_{iβ}^γ)`; zero iff the pair
/// (∇, Δ) preserves g.
pub fn compat_residual(c: &TriConnection, alg: &TrioleAlgebra) -> Vec<Vec<Vec<Vec<Poly>>>> {
    let n = alg.n_vars;
    let mut out = vec![vec![vec![vec![Poly::zero(n); alg.m_q]; alg.m_p]; alg.m_p]; n];
    for i in 0..n {
        for al in 0..alg.m_p {
            for be in 0..alg.m_p {
                for b in 0..alg.m_q {
                    let mut res = alg.g[b][al][be].partial_derivative(i).unwrap();
                    for a in 0..alg.m_q {
                        res = &res + &(&alg.g[a][al][be] * &c.upsilon[i][b][a]);
                    }
                    for ga in 0..alg.m_p {
                        res = &res - &(&alg.g[b][ga][be] * &c.gamma[i][ga][al]);
                        res = &res - &(&alg.g[b][al][ga] * &c.gamma[i][ga][be]);
                    }
                    out[i][al][be][b] = res;
                }
            }
        }
    }
    out
}

pub fn compat_is_zero(c: &TriConnection, alg: &TrioleAlgebra) -> bool {
    compat_residual(c, alg)
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .all(|p| p.is_zero())
}

/// Curvature components `ℛ(P)_{ij}` and `ℛ(Q)_{ij}` as matrices,
/// `ℛ_{ij} = ∂ᵢΓⱼ − ∂ⱼΓᵢ + [Γᵢ, Γⱼ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    /// rp[i][j]: m_P×m_P matrix for i < j (antisymmetric in (i,j)).
    pub rp: Vec<Vec<PolyMatrix>>,
    pub rq: Vec<Vec<PolyMatrix>>,
}

fn curvature_of(coeffs: &[Vec<Vec<Poly>>], n: usize) -> Vec<Vec<PolyMatrix>> {
    let m = coeffs.first().map(|c| c.len()).unwrap_or(0);
    let mat = |i: usize| PolyMatrix::from_rows(coeffs[i].clone());
    let mut out = vec![vec![PolyMatrix::new(n, m, m); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let gi = mat(i);
            let gj = mat(j);
            let mut r = PolyMatrix::new(n, m, m);
            for a in 0..m {
                for b in 0..m {
                    let mut v = coeffs[j][a][b].partial_derivative(i).unwrap();
                    v = &v - &coeffs[i][a][b].partial_derivative(j).unwrap();
                    *r.entry_mut(a, b) = v;
                }
            }
            let comm_part = gi.mat_mul(&gj);
            let comm_part2 = gj.mat_mul(&gi);
            for a in 0..m {
                for b in 0..m {
                    let v = &(r.entry(a, b) + comm_part.entry(a, b)) - comm_part2.entry(a, b);
                    *r.entry_mut(a, b) = v;
                }
            }
            out[i][j] = r;
        }
    }
    out
}

pub fn curvature(c: &TriConnection, _alg: &TrioleAlgebra) -> CurvatureTensor {
    let n = c.n_vars();
    CurvatureTensor {
        rp: curvature_of(&c.gamma, n),
        rq: curvature_of(&c.upsilon, n),
    }
}

impl CurvatureTensor {
    pub fn rp_is_zero(&self) -> bool {
        self.rp
            .iter()
            .flatten()
            .all(|m| (0..m.rows).all(|r| (0..m.cols).all(|c| m.entry(r, c).is_zero())))
    }

    pub fn rq_is_zero(&self) -> bool {
        self.rq
            .iter()
            .flatten()
            .all(|m| (0..m.rows).all(|r| (0..m.cols).all(|c| m.entry(r, c).is_zero())))
    }
}

/// Flatness report: the two curvature families, the im(g)-restricted
/// identity, and metric compatibility (reported separately per the
/// two readings of "triolic splitting").
#[derive(Debug, Clone, Serialize)]
pub struct FlatReport {
    pub flat: bool,
    pub rp_zero: bool,
    pub rq_zero: bool,
    pub im_g_identity: bool,
    pub compat_zero: bool,
    /// When rp, rq and compat all vanish the im(g) identity is implied;
    /// this flag records that the implication was checked.
    pub implication_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// The im(g)-restricted flatness identity (c-terms dropped): for all
/// (i < j, α, β, D),
/// `∂ᵢ(g_{γβ}^D Γ_{jα}^γ + g_{αγ}^D Γ_{jβ}^γ) + (gΓ)ᵢⱼ-Υ-terms − (i↔j) = 0`.
fn im_g_identity_residual(c: &TriConnection, alg: &TrioleAlgebra, i: usize, j: usize) -> Vec<Poly> {
    let n = alg.n_vars;
    let mut out = Vec::new();
    for al in 0..alg.m_p {
        for be in 0..alg.m_p {
            for d in 0..alg.m_q {
                let mut res = Poly::zero(n);
                // +∂_i(g_{γβ}^D Γ_{jα}^γ) + g_{γβ}^B Γ_{jα}^γ Υ_{iB}^D
                // +∂_i(g_{αγ}^D Γ_{jβ}^γ) + g_{αγ}^B Γ_{jβ}^γ Υ_{iB}^D − (i↔j)
                for (s, ii, jj) in [(1i64, i, j), (-1, j, i)] {
                    for ga in 0..alg.m_p {
                        let t1 = &alg.g[d][ga][be] * &c.gamma[jj][ga][al];
                        res = &res + &t1.partial_derivative(ii).unwrap().scale_int(s);
                        let t2 = &alg.g[d][al][ga] * &c.gamma[jj][ga][be];
                        res = &res + &t2.partial_derivative(ii).unwrap().scale_int(s);
                        for b in 0..alg.m_q {
                            let u1 =
                                &(&alg.g[b][ga][be] * &c.gamma[jj][ga][al]) * &c.upsilon[ii][d][b];
                            res = &res + &u1.scale_int(s);
                            let u2 =
                                &(&alg.g[b][al][ga] * &c.gamma[jj][ga][be]) * &c.upsilon[ii][d][b];
                            res = &res + &u2.scale_int(s);
                        }
                    }
                }
                out.push(res);
            }
        }
    }
    out
}

pub fn flat_check(c: &TriConnection, alg: &TrioleAlgebra) -> FlatReport {
    let curv = curvature(c, alg);
    let rp_zero = curv.rp_is_zero();
    let rq_zero = curv.rq_is_zero();
    let compat_zero = compat_is_zero(c, alg);
    let n = alg.n_vars;
    let mut im_g = true;
    let mut witness = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            let res = im_g_identity_residual(c, alg, i, j);
            if res.iter().any(|p| !p.is_zero()) {
                im_g = false;
                witness = Some(Witness::new("im(g) flatness identity", vec![i + 1, j + 1]));
                break 'outer;
            }
        }
    }
    if witness.is_none() && !(rp_zero && rq_zero) {
        'outer2: for i in 0..n {
            for j in i + 1..n {
                let has_rp = (0..curv.rp[i][j].rows).any(|r| {
                    (0..curv.rp[i][j].cols).any(|cc| !curv.rp[i][j].entry(r, cc).is_zero())
                });
                let has_rq = (0..curv.rq[i][j].rows).any(|r| {
                    (0..curv.rq[i][j].cols).any(|cc| !curv.rq[i][j].entry(r, cc).is_zero())
                });
                if has_rp || has_rq {
                    witness = Some(Witness::new("nonzero curvature", vec![i + 1, j + 1]));
                    break 'outer2;
                }
            }
        }
    }
    // with c-terms zero, rp = rq = 0 together with compat = 0 implies
    // the im(g) identity; record the implication check
    let implication_ok = !(rp_zero && rq_zero && compat_zero) || im_g;
    FlatReport {
        flat: rp_zero && rq_zero && im_g,
        rp_zero,
        rq_zero,
        im_g_identity: im_g,
        compat_zero,
        implication_ok,
        witness,
    }
}

/// The linear-vector-field form of the flatness equation, evaluated with
/// formal fiber variables u^β appended to the ring:
/// `∂u_j^α/∂x_i + Σ_β u_i^β ∂u_j^α/∂u^β − (i↔j)` with
/// `u_i^α = −Γ_{iβ}^α u^β`. Independent evaluation route: the result
/// equals the linear-in-u image of −ℛ(P).
pub fn linear_vectorfield_residual(c: &TriConnection, alg: &TrioleAlgebra) -> Vec<Vec<Vec<Poly>>> {
    let n = alg.n_vars;
    let m = alg.m_p;
    // ring ℚ[x₁..xₙ, u¹..u^m]
    let big = n + m;
    let u = |be: usize| Poly::var(big, n + be);
    let u_field = |i: usize, al: usize| {
        // u_i^α = −Σ_β Γ_{iβ}^α u^β
        let mut acc = Poly::zero(big);
        for be in 0..m {
            acc = &acc - &(&c.gamma[i][al][be].extend_vars(m) * &u(be));
        }
        acc
    };
    let mut out = vec![vec![vec![Poly::zero(big); m]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for al in 0..m {
                let mut res = u_field(j, al).partial_derivative(i).unwrap();
                res = &res - &u_field(i, al).partial_derivative(j).unwrap();
                for be in 0..m {
                    res = &res
                        + &(&u_field(i, be) * &u_field(j, al).partial_derivative(n + be).unwrap());
                    res = &res
                        - &(&u_field(j, be) * &u_field(i, al).partial_derivative(n + be).unwrap());
                }
                out[i][j][al] = res;
            }
        }
    }
    out
}

pub fn linear_vectorfield_residual_is_zero(c: &TriConnection, alg: &TrioleAlgebra) -> bool {
    linear_vectorfield_residual(c, alg)
        .iter()
        .flatten()
        .flatten()
        .all(|p| p.is_zero())
}

/// Dual connection coefficients `[Γ^∨]ᵢ = −Γᵢᵀ`.
pub fn dual_connection(gamma: &[Vec<Vec<Poly>>]) -> Vec<Vec<Vec<Poly>>> {
    gamma
        .iter()
        .map(|gi| {
            let m = gi.len();
            (0..m)
                .map(|r| (0..m).map(|c| -&gi[c][r]).collect())
                .collect()
        })
        .collect()
}

/// Kronecker-sum connection on P ⊗ P':
/// `[Γ^⊗]_{αα'}^{ββ'} = Γ_α^β δ_{α'}^{β'} + δ_α^β Γ'_{α'}^{β'}`.
pub fn tensor_connection(
    gamma: &[Vec<Vec<Poly>>],
    gamma2: &[Vec<Vec<Poly>>],
) -> Vec<Vec<Vec<Poly>>> {
    let n = gamma.len();
    let m1 = gamma[0].len();
    let m2 = gamma2[0].len();
    let nv = gamma[0][0][0].n_vars();
    (0..n)
        .map(|i| {
            let mut out = vec![vec![Poly::zero(nv); m1 * m2]; m1 * m2];
            for b1 in 0..m1 {
                for b2 in 0..m2 {
                    for a1 in 0..m1 {
                        for a2 in 0..m2 {
                            let mut v = Poly::zero(nv);
                            if a2 == b2 {
                                v = &v + &gamma[i][b1][a1];
                            }
                            if a1 == b1 {
                                v = &v + &gamma2[i][b2][a2];
                            }
                            out[b1 * m2 + b2][a1 * m2 + a2] = v;
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Connection on End(P): `∇ᵢ(φ) = ∂ᵢφ + [Γᵢ, φ]`, returned as
/// coefficients on the flattened (row, col) basis.
pub fn end_connection(gamma: &[Vec<Vec<Poly>>]) -> Vec<Vec<Vec<Poly>>> {
    tensor_connection(gamma, &dual_connection(gamma))
}

/// Σ-coefficients of the induced Der-operator on Bil(P,Q):
/// `Σ = Γ^∨⊗δ⊗δ + δ⊗Γ^∨⊗δ + δ⊗δ⊗Υ` on the flattened (α,β,A) basis.
pub fn bil_connection(c: &TriConnection) -> Vec<Vec<Vec<Poly>>> {
    let dual = dual_connection(&c.gamma);
    let n = c.n_vars();
    let mp = c.m_p();
    let mq = c.m_q();
    let nv = mp * mp * mq;
    let poly_n = c.gamma[0][0][0].n_vars();
    (0..n)
        .map(|i| {
            let mut out = vec![vec![Poly::zero(poly_n); nv]; nv];
            let idx = |al: usize, be: usize, a: usize| (al * mp + be) * mq + a;
            for al in 0..mp {
                for be in 0..mp {
                    for a in 0..mq {
                        for al2 in 0..mp {
                            for be2 in 0..mp {
                                for a2 in 0..mq {
                                    let mut v = Poly::zero(poly_n);
                                    if be2 == be && a2 == a {
                                        v = &v + &dual[i][al][al2];
                                    }
                                    if al2 == al && a2 == a {
                                        v = &v + &dual[i][be][be2];
                                    }
                                    if al2 == al && be2 == be {
                                        v = &v + &c.upsilon[i][a][a2];
                                    }
                                    out[idx(al, be, a)][idx(al2, be2, a2)] = v;
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Induced-connection dispatcher for the named kinds.
pub fn induced_connection(
    c: &TriConnection,
    kind: &str,
    other: Option<&TriConnection>,
) -> Result<Vec<Vec<Vec<Poly>>>, CalcError> {
    match kind {
        "dual" => Ok(dual_connection(&c.gamma)),
        "tensorP" => {
            let o = other
                .ok_or_else(|| CalcError::Invalid("tensorP needs a second connection".into()))?;
            Ok(tensor_connection(&c.gamma, &o.gamma))
        }
        "end" => Ok(end_connection(&c.gamma)),
        "bil" => Ok(bil_connection(c)),
        k => Err(CalcError::Invalid(format!("unknown induced kind {k}"))),
    }
}

/// A tensor with `up` contravariant and `down` covariant P-indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ValenceTensor {
    pub up: usize,
    pub down: usize,
    pub m: usize,
    /// Row-major over (up indices.., down indices..).
    pub data: Vec<Poly>,
}

impl ValenceTensor {
    pub fn from_matrix(m: &[Vec<Poly>]) -> Self {
        let size = m.len();
        let mut data = Vec::with_capacity(size * size);
        for row in m {
            for e in row {
                data.push(e.clone());
            }
        }
        ValenceTensor {
            up: 1,
            down: 1,
            m: size,
            data,
        }
    }

    fn rank(&self) -> usize {
        self.up + self.down
    }

    fn len(&self) -> usize {
        self.m.pow(self.rank() as u32)
    }

    fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.rank()];
        for slot in (0..self.rank()).rev() {
            out[slot] = idx % self.m;
            idx /= self.m;
        }
        out
    }

    fn flatten(&self, idxs: &[usize]) -> usize {
        idxs.iter().fold(0, |acc, &i| acc * self.m + i)
    }
}

/// Covariant derivative of a valence-(p,q) tensor along ∂ᵢ:
/// `∂ᵢT + Γ on each upper index − Γᵀ on each lower index`.
fn nabla_tensor(c: &TriConnection, t: &ValenceTensor, i: usize) -> ValenceTensor {
    let n_poly = t.data[0].n_vars();
    let mut out = ValenceTensor {
        up: t.up,
        down: t.down,
        m: t.m,
        data: t
            .data
            .iter()
            .map(|p| p.partial_derivative(i).unwrap())
            .collect(),
    };
    for flat in 0..t.len() {
        let idxs = out.unflatten(flat);
        for slot in 0..t.rank() {
            let is_up = slot < t.up;
            for ga in 0..t.m {
                let mut src = idxs.clone();
                src[slot] = ga;
                let coeff = if is_up {
                    c.gamma[i][idxs[slot]][ga].clone()
                } else {
                    -&c.gamma[i][ga][idxs[slot]]
                };
                if coeff.is_zero() {
                    continue;
                }
                let add = &coeff * &t.data[t.flatten(&src)];
                out.data[flat] = &out.data[flat] + &add;
            }
        }
    }
    let _ = n_poly;
    out
}

/// `∇^End(φ) = 0` for every ∂ᵢ?
pub fn preserves_endomorphism(c: &TriConnection, phi: &[Vec<Poly>], _alg: &TrioleAlgebra) -> bool {
    let t = ValenceTensor::from_matrix(phi);
    (0..c.n_vars()).all(|i| nabla_tensor(c, &t, i).data.iter().all(|p| p.is_zero()))
}

/// Valence-(p,q) generalization via the induced connections; capped at
/// p + q ≤ 3.
pub fn preserves_tensor(
    c: &TriConnection,
    t: &ValenceTensor,
    _alg: &TrioleAlgebra,
) -> Result<bool, CalcError> {
    if t.rank() > 3 {
        return Err(CalcError::ValenceCapExceeded(t.rank()));
    }
    Ok((0..c.n_vars()).all(|i| nabla_tensor(c, t, i).data.iter().all(|p| p.is_zero())))
}

/// Search for a constant connection preserving Ξ (constant Γ unknowns,
/// exact ℚ-linear solve). `Some(gamma)` exhibits a gauge structure.
pub fn gauge_structure_search(
    t: &ValenceTensor,
    n_vars: usize,
) -> Result<Option<Vec<Vec<Vec<Poly>>>>, CalcError> {
    if t.rank() > 3 {
        return Err(CalcError::ValenceCapExceeded(t.rank()));
    }
    let m = t.m;
    let unknowns = n_vars * m * m; // Γ_{iα}^β constants
    let gidx = |i: usize, be: usize, al: usize| (i * m + be) * m + al;
    let max_deg = t.data.iter().map(|p| p.total_degree()).max().unwrap_or(0);
    let eq_mons = monomials_up_to(n_vars, max_deg.max(1));
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for i in 0..n_vars {
        for flat in 0..t.len() {
            let idxs = t.unflatten(flat);
            // ∂ᵢT[flat] + Σ_slots (±Γ-contractions) = 0, linear in Γ
            let base = t.data[flat].partial_derivative(i)?;
            for em in &eq_mons {
                let mut row = vec![BigRational::zero(); unknowns];
                for slot in 0..t.rank() {
                    let is_up = slot < t.up;
                    for ga in 0..m {
                        let mut src = idxs.clone();
                        src[slot] = ga;
                        let coeff = t.data[t.flatten(&src)].coeff(em);
                        if coeff.is_zero() {
                            continue;
                        }
                        let col = if is_up {
                            gidx(i, idxs[slot], ga)
                        } else {
                            gidx(i, ga, idxs[slot])
                        };
                        let signed = if is_up { coeff } else { -coeff };
                        row[col] = &row[col] + &signed;
                    }
                }
                rows.push(row);
                rhs.push(-base.coeff(em));
            }
        }
    }
    let mut mat = RatMat::new(rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                *mat.at_mut(r, c) = v.clone();
            }
        }
    }
    let Some(sol) = mat.solve(&rhs) else {
        return Ok(None);
    };
    let mut gamma = vec![vec![vec![Poly::zero(n_vars); m]; m]; n_vars];
    for i in 0..n_vars {
        for be in 0..m {
            for al in 0..m {
                let v = sol[gidx(i, be, al)].clone();
                if !v.is_zero() {
                    gamma[i][be][al] = Poly::constant(n_vars, v);
                }
            }
        }
    }
    Ok(Some(gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    OrthogonalInf,
    OrthogonalGroup,
    Commutant,
}

/// Membership tests for the symmetry algebras of an inner structure:
/// o(P,b), O(P,b) and the commutant gl(P,ψ).
pub fn symmetry_check(
    kind: SymmetryKind,
    phi: &[Vec<Poly>],
    data: &[Vec<Poly>],
    _alg: &TrioleAlgebra,
) -> Result<bool, CalcError> {
    let m = PolyMatrix::from_rows(phi.to_vec());
    let b = PolyMatrix::from_rows(data.to_vec());
    match kind {
        SymmetryKind::OrthogonalInf => {
            // b(φp₁,p₂) + b(p₁,φp₂) = 0 ⟺ φᵀB + Bφ = 0
            let lhs = m.transpose().mat_mul(&b);
            let rhs = b.mat_mul(&m);
            Ok((0..lhs.rows)
                .all(|r| (0..lhs.cols).all(|c| (lhs.entry(r, c) + rhs.entry(r, c)).is_zero())))
        }
        SymmetryKind::OrthogonalGroup => {
            if !m.det_is_unit() {
                return Ok(false);
            }
            let lhs = m.transpose().mat_mul(&b).mat_mul(&m);
            Ok(lhs == b)
        }
        SymmetryKind::Commutant => {
            let lhs = m.mat_mul(&b);
            let rhs = b.mat_mul(&m);
            Ok(lhs == rhs)
        }
    }
}

/// Validation wrapper used by the CLI: shapes plus a metric-compatibility
/// flag (compatibility is an operation, not a connection invariant).
pub fn validate_connection_shapes(c: &TriConnection, alg: &TrioleAlgebra) -> ValidationReport {
    let n = alg.n_vars;
    if c.gamma.len() != n
        || c.upsilon.len() != n
        || c.gamma
            .iter()
            .any(|m| m.len() != alg.m_p || m.iter().any(|r| r.len() != alg.m_p))
        || c.upsilon
            .iter()
            .any(|m| m.len() != alg.m_q || m.iter().any(|r| r.len() != alg.m_q))
    {
        return ValidationReport::fail(Witness::new("connection shapes", vec![]));
    }
    ValidationReport::ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn curved_example() -> (TriConnection, TrioleAlgebra) {
        // Γ₁ = [[0, x₂], [−x₂, 0]], Γ₂ = 0 over n = 2, m_P = 2, m_Q = 1
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let mut c = TriConnection::zero(2, 2, 1);
        c.gamma[0][0][1] = x(2, 1);
        c.gamma[0][1][0] = -&x(2, 1);
        (c, alg)
    }

    #[test]
    fn compat_zero_for_trivial_connection_constant_metric() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let c = TriConnection::zero(2, 2, 1);
        assert!(compat_is_zero(&c, &alg));
    }

    #[test]
    fn compat_skew_gamma_identity_metric() {
        let (c, alg) = curved_example();
        // Γ skew, Υ = 0, identity g: compat = 0
        assert!(compat_is_zero(&c, &alg));
        // symmetric nonzero Γ: residual 2Γ ≠ 0
        let mut c2 = TriConnection::zero(2, 2, 1);
        c2.gamma[0][0][1] = x(2, 1);
        c2.gamma[0][1][0] = x(2, 1);
        let res = compat_residual(&c2, &alg);
        assert_eq!(res[0][0][1][0], x(2, 1).scale_int(-2));
        assert!(!compat_is_zero(&c2, &alg));
    }

    #[test]
    fn curvature_of_curved_example() {
        let (c, alg) = curved_example();
        let curv = curvature(&c, &alg);
        // ℛ(P)₁₂ = −∂₂Γ₁ = [[0, −1], [1, 0]]
        let r12 = &curv.rp[0][1];
        assert_eq!(*r12.entry(0, 1), Poly::from_int(2, -1));
        assert_eq!(*r12.entry(1, 0), Poly::one(2));
        assert!(r12.entry(0, 0).is_zero() && r12.entry(1, 1).is_zero());
        // antisymmetry in (i,j)
        let r21 = &curv.rp[1][0];
        assert_eq!(*r21.entry(0, 1), Poly::one(2));
        // Υ = 0 ⇒ ℛ(Q) = 0
        assert!(curv.rq_is_zero());
    }

    #[test]
    fn pure_gauge_is_flat() {
        // S = [[1, x₁], [0, 1]]
        let n = 2;
        let s = PolyMatrix::from_rows(vec![
            vec![Poly::one(n), x(n, 0)],
            vec![Poly::zero(n), Poly::one(n)],
        ]);
        let c = TriConnection::pure_gauge(&s, 1).unwrap();
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let curv = curvature(&c, &alg);
        assert!(curv.rp_is_zero());
        let rep = flat_check(&c, &alg);
        assert!(rep.flat);
        assert!(rep.implication_ok);
        // compat is flagged separately: this gauge is not metric for id g
        assert!(!rep.compat_zero);
    }

    #[test]
    fn flat_check_trivial_and_curved() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let c = TriConnection::zero(2, 2, 1);
        let rep = flat_check(&c, &alg);
        assert!(rep.flat && rep.compat_zero && rep.im_g_identity);
        let (curved, alg2) = curved_example();
        let rep2 = flat_check(&curved, &alg2);
        assert!(!rep2.flat);
        let w = rep2.witness.unwrap();
        assert_eq!(w.indices, vec![1, 2]);
    }

    #[test]
    fn linear_vectorfield_matches_curvature() {
        let (curved, alg) = curved_example();
        // residual = −ℛ(P) contracted with u
        let res = linear_vectorfield_residual(&curved, &alg);
        let curv = curvature(&curved, &alg);
        let n = 2;
        let m = 2;
        for al in 0..m {
            let mut expect = Poly::zero(n + m);
            for ga in 0..m {
                expect = &expect
                    - &(&curv.rp[0][1].entry(al, ga).extend_vars(m) * &Poly::var(n + m, n + ga));
            }
            assert_eq!(res[0][1][al], expect);
        }
        // flat connections give zero residual
        let s = PolyMatrix::from_rows(vec![
            vec![Poly::one(n), x(n, 0)],
            vec![Poly::zero(n), Poly::one(n)],
        ]);
        let flat = TriConnection::pure_gauge(&s, 1).unwrap();
        assert!(linear_vectorfield_residual_is_zero(&flat, &alg));
        assert!(linear_vectorfield_residual_is_zero(
            &TriConnection::zero(2, 2, 1),
            &alg
        ));
    }

    #[test]
    fn induced_connection_kinds() {
        let (c, _alg) = curved_example();
        // dual: −Γᵀ
        let dual = dual_connection(&c.gamma);
        assert_eq!(dual[0][1][0], -&c.gamma[0][0][1]);
        // Kronecker sum shape
        let tens = tensor_connection(&c.gamma, &c.gamma);
        assert_eq!(tens[0].len(), 4);
        // bil with Γ = Υ = 0 is zero
        let zero = TriConnection::zero(2, 2, 1);
        let bil = bil_connection(&zero);
        assert!(bil.iter().flatten().flatten().all(|p| p.is_zero()));
    }

    #[test]
    fn bil_connection_recovers_compat_residual() {
        // ∇^{Bil}(g) componentwise equals the compatibility residual
        let (c, alg) = curved_example();
        let sigma = bil_connection(&c);
        let res = compat_residual(&c, &alg);
        let mp = 2;
        let mq = 1;
        let idx = |al: usize, be: usize, a: usize| (al * mp + be) * mq + a;
        for i in 0..2 {
            for al in 0..mp {
                for be in 0..mp {
                    for a in 0..mq {
                        let mut v = alg.g[a][al][be].partial_derivative(i).unwrap();
                        for al2 in 0..mp {
                            for be2 in 0..mp {
                                for a2 in 0..mq {
                                    v = &v
                                        + &(&sigma[i][idx(al, be, a)][idx(al2, be2, a2)]
                                            * &alg.g[a2][al2][be2]);
                                }
                            }
                        }
                        assert_eq!(v, res[i][al][be][a]);
                    }
                }
            }
        }
    }

    #[test]
    fn preserves_endomorphism_examples() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let zero = TriConnection::zero(2, 2, 1);
        let constant = vec![
            vec![Poly::one(2), Poly::from_int(2, 2)],
            vec![Poly::zero(2), Poly::from_int(2, 3)],
        ];
        assert!(preserves_endomorphism(&zero, &constant, &alg));
        // Γ = 0, φ = x₁·id: not preserved
        let xid = vec![vec![x(2, 0), Poly::zero(2)], vec![Poly::zero(2), x(2, 0)]];
        assert!(!preserves_endomorphism(&zero, &xid, &alg));
        // any Γ, φ = id: preserved
        let (c, _) = curved_example();
        let id = vec![
            vec![Poly::one(2), Poly::zero(2)],
            vec![Poly::zero(2), Poly::one(2)],
        ];
        assert!(preserves_endomorphism(&c, &id, &alg));
    }

    #[test]
    fn valence_cap() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let c = TriConnection::zero(2, 2, 1);
        let t = ValenceTensor {
            up: 2,
            down: 2,
            m: 2,
            data: vec![Poly::zero(2); 16],
        };
        assert!(matches!(
            preserves_tensor(&c, &t, &alg),
            Err(CalcError::ValenceCapExceeded(4))
        ));
    }

    #[test]
    fn gauge_structure_search_examples() {
        // constant endomorphism: the trivial connection preserves it
        let constant = ValenceTensor::from_matrix(&[
            vec![Poly::one(2), Poly::from_int(2, 2)],
            vec![Poly::from_int(2, 3), Poly::from_int(2, 4)],
        ]);
        let sol = gauge_structure_search(&constant, 2).unwrap();
        assert!(sol.is_some());
        // x₁·id commutes with everything: ∇(x₁ id) = dx₁·id + [Γ, x₁ id]
        // = dx₁·id ≠ 0 for constant Γ ⇒ no gauge structure
        let xid = ValenceTensor::from_matrix(&[
            vec![x(2, 0), Poly::zero(2)],
            vec![Poly::zero(2), x(2, 0)],
        ]);
        assert!(gauge_structure_search(&xid, 2).unwrap().is_none());
    }

    #[test]
    fn symmetry_checks() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let id = vec![
            vec![Poly::one(2), Poly::zero(2)],
            vec![Poly::zero(2), Poly::one(2)],
        ];
        // skew φ is an infinitesimal symmetry of the identity form
        let skew = vec![vec![Poly::zero(2), x(2, 0)], vec![-&x(2, 0), Poly::zero(2)]];
        assert!(symmetry_check(SymmetryKind::OrthogonalInf, &skew, &id, &alg).unwrap());
        // any Φ commutes with ψ = id
        let any = vec![vec![x(2, 0), Poly::one(2)], vec![Poly::zero(2), x(2, 1)]];
        assert!(symmetry_check(SymmetryKind::Commutant, &any, &id, &alg).unwrap());
        // constant rotation is in O(P, id): scaled rational rotation
        let c = BigRational::new(3.into(), 5.into());
        let s = BigRational::new(4.into(), 5.into());
        let rot = vec![
            vec![Poly::constant(2, c.clone()), Poly::constant(2, -s.clone())],
            vec![Poly::constant(2, s), Poly::constant(2, c)],
        ];
        assert!(symmetry_check(SymmetryKind::OrthogonalGroup, &rot, &id, &alg).unwrap());
    }

    #[test]
    fn gauge_covariance_of_curvature() {
        // Γ' = S⁻¹ΓS for constant S: ℛ' = S⁻¹ℛS
        let (c, alg) = curved_example();
        let n = 2;
        let s = PolyMatrix::from_rows(vec![
            vec![Poly::one(n), Poly::from_int(n, 2)],
            vec![Poly::from_int(n, 1), Poly::from_int(n, 3)],
        ]);
        let s_inv = s.inverse_unit_det().unwrap();
        let mut transported = TriConnection::zero(2, 2, 1);
        for i in 0..2 {
            let gi = PolyMatrix::from_rows(c.gamma[i].clone());
            let new = s_inv.mat_mul(&gi).mat_mul(&s);
            for r in 0..2 {
                for cc in 0..2 {
                    transported.gamma[i][r][cc] = new.entry(r, cc).clone();
                }
            }
        }
        let curv = curvature(&c, &alg);
        let curv_t = curvature(&transported, &alg);
        let expect = s_inv.mat_mul(&curv.rp[0][1]).mat_mul(&s);
        assert_eq!(curv_t.rp[0][1], expect);
    }

    #[test]
    fn curvature_of_metric_connection_is_infinitesimal_symmetry() {
        // compat = 0, Υ = 0, scalar g: ℛ(P)_{ij} ∈ o(P, g)
        let (c, alg) = curved_example();
        assert!(compat_is_zero(&c, &alg));
        let curv = curvature(&c, &alg);
        let b: Vec<Vec<Poly>> = (0..2)
            .map(|r| (0..2).map(|cc| alg.g[0][r][cc].clone()).collect())
            .collect();
        let rp: Vec<Vec<Poly>> = (0..2)
            .map(|r| {
                (0..2)
                    .map(|cc| curv.rp[0][1].entry(r, cc).clone())
                    .collect()
            })
            .collect();
        assert!(symmetry_check(SymmetryKind::OrthogonalInf, &rp, &b, &alg).unwrap());
    }
}
