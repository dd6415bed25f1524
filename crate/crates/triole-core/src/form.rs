//! P-valued differential forms, the covariant de Rham differential, the
//! d² = ℛ∧ identity and degree-bounded ∇-constant sections (H⁰).

use crate::algebra::TrioleAlgebra;
use crate::connection::{curvature, TriConnection};
use crate::linalg::RatMat;
use crate::poly::{monomials_up_to, Poly};
use num::{BigRational, Zero};
use std::collections::BTreeMap;

/// A P-valued k-form stored on strictly increasing index tuples;
/// values at other tuples follow by antisymmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct PForm {
    pub k: usize,
    pub n_vars: usize,
    pub m_p: usize,
    /// increasing tuple -> coefficient vector of length m_P
    coeffs: BTreeMap<Vec<usize>, Vec<Poly>>,
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(out, cur, i + 1, n, k);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), 0, n, k);
    out
}

/// Sort a tuple, returning (sorted, sign); `None` when an index repeats.
fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v: Vec<usize> = tuple.to_vec();
    let mut sign = 1i64;
    for i in 0..v.len() {
        for j in (i + 1..v.len()).rev() {
            if v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

impl PForm {
    pub fn zero(n_vars: usize, m_p: usize, k: usize) -> Self {
        PForm {
            k,
            n_vars,
            m_p,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-form is a P-section.
    pub fn from_section(p: Vec<Poly>) -> Self {
        let n = p[0].n_vars();
        let m = p.len();
        let mut f = PForm::zero(n, m, 0);
        f.set(&[], p);
        f
    }

    pub fn set(&mut self, tuple: &[usize], value: Vec<Poly>) {
        assert_eq!(tuple.len(), self.k);
        assert_eq!(value.len(), self.m_p);
        let (sorted, sign) = sort_with_sign(tuple).expect("repeated index");
        let v = if sign == 1 {
            value
        } else {
            value.iter().map(|p| p.scale_int(-1)).collect()
        };
        if v.iter().all(|p| p.is_zero()) {
            self.coeffs.remove(&sorted);
        } else {
            self.coeffs.insert(sorted, v);
        }
    }

    /// Value on an arbitrary tuple (0 when an index repeats).
    pub fn get(&self, tuple: &[usize]) -> Vec<Poly> {
        assert_eq!(tuple.len(), self.k);
        let zero = vec![Poly::zero(self.n_vars); self.m_p];
        let Some((sorted, sign)) = sort_with_sign(tuple) else {
            return zero;
        };
        match self.coeffs.get(&sorted) {
            None => zero,
            Some(v) if sign == 1 => v.clone(),
            Some(v) => v.iter().map(|p| p.scale_int(-1)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &PForm) -> PForm {
        assert_eq!((self.k, self.m_p), (other.k, other.m_p));
        let mut out = self.clone();
        for (t, v) in &other.coeffs {
            let cur = out.get(t);
            let sum: Vec<Poly> = cur.iter().zip(v).map(|(a, b)| a + b).collect();
            out.set(&t.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &PForm) -> PForm {
        self.add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, s: i64) -> PForm {
        PForm {
            k: self.k,
            n_vars: self.n_vars,
            m_p: self.m_p,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, v)| (t.clone(), v.iter().map(|p| p.scale_int(s)).collect()))
                .collect(),
        }
    }

    /// Multiply by a scalar function.
    pub fn scale_fn(&self, a: &Poly) -> PForm {
        PForm {
            k: self.k,
            n_vars: self.n_vars,
            m_p: self.m_p,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, v)| (t.clone(), v.iter().map(|p| p * a).collect()))
                .collect(),
        }
    }
}

/// Covariant exterior differential in the holonomic frame:
/// `(dω)_{i₀..i_k} = Σ_j (−1)^j ∇_{i_j}(ω_{..î_j..})`.
pub fn covariant_d(omega: &PForm, c: &TriConnection, alg: &TrioleAlgebra) -> PForm {
    let n = alg.n_vars;
    let mut out = PForm::zero(n, alg.m_p, omega.k + 1);
    if omega.k >= n {
        return out; // Ω^{n+1} = 0
    }
    for tuple in increasing_tuples(n, omega.k + 1) {
        let mut val = vec![Poly::zero(n); alg.m_p];
        for (pos, &i) in tuple.iter().enumerate() {
            let mut rest: Vec<usize> = tuple.clone();
            rest.remove(pos);
            let inner = omega.get(&rest);
            let nabla = c.nabla_p(i, &inner);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            for (v, nv) in val.iter_mut().zip(&nabla) {
                *v = &*v + &nv.scale_int(sign);
            }
        }
        out.set(&tuple, val);
    }
    out
}

/// Wedge of the End-valued curvature 2-form with a k-form:
/// `(ℛ∧ω)(X₁..X_{k+2}) = Σ_{|I|=2} (−1)^I ℛ(X_I)(ω(X_Ī))`.
pub fn curvature_wedge(c: &TriConnection, omega: &PForm, alg: &TrioleAlgebra) -> PForm {
    let n = alg.n_vars;
    let curv = curvature(c, alg);
    let mut out = PForm::zero(n, alg.m_p, omega.k + 2);
    for tuple in increasing_tuples(n, omega.k + 2) {
        let mut val = vec![Poly::zero(n); alg.m_p];
        for s in 0..tuple.len() {
            for t in s + 1..tuple.len() {
                // shuffle sign for moving positions (s, t) to the front
                let sign = if (s + t + 1) % 2 == 0 { 1 } else { -1 };
                let (i, j) = (tuple[s], tuple[t]);
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| *pos != s && *pos != t)
                    .map(|(_, &v)| v)
                    .collect();
                let w = omega.get(&rest);
                let r = &curv.rp[i][j];
                for be in 0..alg.m_p {
                    let mut acc = Poly::zero(n);
                    for ga in 0..alg.m_p {
                        acc = &acc + &(r.entry(be, ga) * &w[ga]);
                    }
                    val[be] = &val[be] + &acc.scale_int(sign);
                }
            }
        }
        out.set(&tuple, val);
    }
    out
}

/// Checks `(d∘d)(ω) = ℛ∧ω` exactly; returns both sides.
pub fn d_squared_vs_curvature(
    omega: &PForm,
    c: &TriConnection,
    alg: &TrioleAlgebra,
) -> (PForm, PForm, bool) {
    let dd = covariant_d(&covariant_d(omega, c, alg), c, alg);
    let rw = curvature_wedge(c, omega, alg);
    let equal = dd.sub(&rw).is_zero();
    (dd, rw, equal)
}

/// Exact kernel of d⁰_∇ on polynomial sections of degree ≤ d_max:
/// basis of ∇-constant sections via a ℚ-linear solve on coefficients.
pub fn nabla_constant_sections(
    c: &TriConnection,
    alg: &TrioleAlgebra,
    d_max: u32,
) -> Vec<Vec<Poly>> {
    let n = alg.n_vars;
    let m = alg.m_p;
    let unk_mons = monomials_up_to(n, d_max);
    let gamma_deg = c
        .gamma
        .iter()
        .flatten()
        .flatten()
        .map(|p| p.total_degree())
        .max()
        .unwrap_or(0);
    let eq_mons = monomials_up_to(n, d_max + gamma_deg);
    let unknowns = m * unk_mons.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        for be in 0..m {
            // ∂ᵢ p^β + Σ_α Γ_{iα}^β p^α = 0
            for em in &eq_mons {
                let mut row = vec![BigRational::zero(); unknowns];
                for (mi, um) in unk_mons.iter().enumerate() {
                    // derivative term for p^β's monomial um
                    if um.0[i] > 0 {
                        let mut d = um.0.clone();
                        d[i] -= 1;
                        if crate::poly::Monomial(d.clone()) == *em {
                            row[be * unk_mons.len() + mi] = &row[be * unk_mons.len() + mi]
                                + &BigRational::from_integer((um.0[i] as i64).into());
                        }
                    }
                    for al in 0..m {
                        if um.divides(em) {
                            let cc = c.gamma[i][be][al].coeff(&em.div(um));
                            if !cc.is_zero() {
                                row[al * unk_mons.len() + mi] =
                                    &row[al * unk_mons.len() + mi] + &cc;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let mut mat = RatMat::new(rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (cc, v) in row.iter().enumerate() {
            if !v.is_zero() {
                *mat.at_mut(r, cc) = v.clone();
            }
        }
    }
    mat.kernel_basis()
        .into_iter()
        .map(|sol| {
            (0..m)
                .map(|be| {
                    let mut p = Poly::zero(n);
                    for (mi, um) in unk_mons.iter().enumerate() {
                        let coeff = sol[be * unk_mons.len() + mi].clone();
                        if !coeff.is_zero() {
                            p = &p + &Poly::monomial(n, &um.0, coeff);
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{in_span, PolyMatrix};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn curved() -> (TriConnection, TrioleAlgebra) {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let mut c = TriConnection::zero(2, 2, 1);
        c.gamma[0][0][1] = x(2, 1);
        c.gamma[0][1][0] = -&x(2, 1);
        (c, alg)
    }

    #[test]
    fn trivial_connection_is_exterior_derivative() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let c = TriConnection::zero(2, 2, 1);
        // p = (x₁, 0): dp(∂₁) = (1, 0)
        let p = PForm::from_section(vec![x(2, 0), Poly::zero(2)]);
        let dp = covariant_d(&p, &c, &alg);
        assert_eq!(dp.get(&[0]), vec![Poly::one(2), Poly::zero(2)]);
        assert_eq!(dp.get(&[1]), vec![Poly::zero(2); 2]);
        // constant section: dp = 0
        let cst = PForm::from_section(vec![Poly::one(2), Poly::from_int(2, -3)]);
        assert!(covariant_d(&cst, &c, &alg).is_zero());
        // d∘d = 0 for the flat trivial connection
        let dd = covariant_d(&dp, &c, &alg);
        assert!(dd.is_zero());
    }

    #[test]
    fn d_squared_equals_curvature_wedge() {
        let (c, alg) = curved();
        let omega = PForm::from_section(vec![Poly::one(2), Poly::zero(2)]);
        let (dd, rw, equal) = d_squared_vs_curvature(&omega, &c, &alg);
        assert!(equal);
        assert!(!dd.is_zero());
        assert!(!rw.is_zero());
        // flat connection: both sides vanish
        let flat = TriConnection::zero(2, 2, 1);
        let (dd0, rw0, eq0) = d_squared_vs_curvature(&omega, &flat, &alg);
        assert!(eq0 && dd0.is_zero() && rw0.is_zero());
    }

    #[test]
    fn d_squared_on_one_forms_n3() {
        // k = 1 needs n ≥ 3 for a nonvacuous statement
        let alg = TrioleAlgebra::identity_metric(3, 2);
        let mut c = TriConnection::zero(3, 2, 1);
        c.gamma[0][0][1] = x(3, 1);
        c.gamma[0][1][0] = -&x(3, 1);
        c.gamma[2][0][1] = x(3, 0);
        c.gamma[2][1][0] = -&x(3, 0);
        let mut omega = PForm::zero(3, 2, 1);
        omega.set(&[0], vec![x(3, 2), Poly::one(3)]);
        omega.set(&[1], vec![Poly::zero(3), &x(3, 0) * &x(3, 1)]);
        omega.set(&[2], vec![x(3, 0), Poly::zero(3)]);
        let (_, _, equal) = d_squared_vs_curvature(&omega, &c, &alg);
        assert!(equal);
    }

    #[test]
    fn leibniz_for_wedge_module_structure() {
        // d(aω) = da∧ω + a dω for 0-forms
        let (c, alg) = curved();
        let a = &x(2, 0) * &x(2, 1);
        let p = PForm::from_section(vec![x(2, 1), Poly::one(2)]);
        let lhs = covariant_d(&p.scale_fn(&a), &c, &alg);
        let d_p = covariant_d(&p, &c, &alg).scale_fn(&a);
        // da∧p: (da∧p)(∂ᵢ) = ∂ᵢ(a)·p
        let mut da_wedge = PForm::zero(2, 2, 1);
        for i in 0..2 {
            let da = a.partial_derivative(i).unwrap();
            da_wedge.set(&[i], p.get(&[]).iter().map(|v| v * &da).collect());
        }
        assert!(lhs.sub(&d_p.add(&da_wedge)).is_zero());
    }

    #[test]
    fn h0_trivial_connection_is_constants() {
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let c = TriConnection::zero(2, 2, 1);
        let basis = nabla_constant_sections(&c, &alg, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v.iter().all(|p| p.is_constant()));
        }
    }

    #[test]
    fn h0_curved_is_empty() {
        let (c, alg) = curved();
        assert!(nabla_constant_sections(&c, &alg, 2).is_empty());
    }

    #[test]
    fn h0_pure_gauge_gives_inverse_columns() {
        let n = 2;
        let s = PolyMatrix::from_rows(vec![
            vec![Poly::one(n), x(n, 0)],
            vec![Poly::zero(n), Poly::one(n)],
        ]);
        let c = TriConnection::pure_gauge(&s, 1).unwrap();
        let alg = TrioleAlgebra::identity_metric(2, 2);
        let basis = nabla_constant_sections(&c, &alg, 3);
        assert_eq!(basis.len(), 2);
        let s_inv = s.inverse_unit_det().unwrap();
        for col in 0..2 {
            let v: Vec<Poly> = (0..2).map(|r| s_inv.entry(r, col).clone()).collect();
            assert!(in_span(&basis, &v));
        }
    }
}
