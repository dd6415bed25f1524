//! Finite-dimensional triolic Lie algebras: `𝔤₀ ⊕ 𝔤₁ ⊤ 𝔤₂` with a Lie
//! bracket on 𝔤₀, representations ρ₁, ρ₂ and a skew pairing
//! ⟨−,−⟩: 𝔤₁⊗𝔤₁ → 𝔤₂ satisfying the ρ-compatibility relation.

use crate::report::{ValidationReport, Witness};
use num::{BigRational, Zero};

/// Structure data over ℚ.
#[derive(Debug, Clone)]
pub struct TriolicLieAlgebraData {
    pub dim0: usize,
    pub dim1: usize,
    pub dim2: usize,
    /// bracket[i][j][k]: the k-component of [e_i, e_j] in 𝔤₀.
    pub bracket: Vec<Vec<Vec<BigRational>>>,
    /// rho1[i]: dim1×dim1 matrix of the action of e_i on 𝔤₁.
    pub rho1: Vec<Vec<Vec<BigRational>>>,
    /// rho2[i]: dim2×dim2 matrix of the action of e_i on 𝔤₂.
    pub rho2: Vec<Vec<Vec<BigRational>>>,
    /// pairing[a][b][c]: the c-component of ⟨f_a, f_b⟩ ∈ 𝔤₂.
    pub pairing: Vec<Vec<Vec<BigRational>>>,
}

fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .fold(BigRational::zero(), |acc, t| acc + t)
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    let inner = b.len();
    let cols = b[0].len();
    (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    (0..inner)
                        .map(|k| &a[r][k] * &b[k][c])
                        .fold(BigRational::zero(), |acc, t| acc + t)
                })
                .collect()
        })
        .collect()
}

fn mat_sub(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn mat_is_zero(a: &[Vec<BigRational>]) -> bool {
    a.iter().flatten().all(|x| x.is_zero())
}

fn lin_comb(coeffs: &[BigRational], mats: &[Vec<Vec<BigRational>>]) -> Vec<Vec<BigRational>> {
    let rows = mats[0].len();
    let cols = mats[0][0].len();
    let mut out = vec![vec![BigRational::zero(); cols]; rows];
    for (c, m) in coeffs.iter().zip(mats) {
        if c.is_zero() {
            continue;
        }
        for r in 0..rows {
            for cc in 0..cols {
                out[r][cc] = &out[r][cc] + &(c * &m[r][cc]);
            }
        }
    }
    out
}

impl TriolicLieAlgebraData {
    /// Abelian 𝔤₀ with zero representations and the given skew pairing.
    pub fn abelian(dim0: usize, dim1: usize, dim2: usize) -> Self {
        TriolicLieAlgebraData {
            dim0,
            dim1,
            dim2,
            bracket: vec![vec![vec![BigRational::zero(); dim0]; dim0]; dim0],
            rho1: vec![vec![vec![BigRational::zero(); dim1]; dim1]; dim0],
            rho2: vec![vec![vec![BigRational::zero(); dim2]; dim2]; dim0],
            pairing: vec![vec![vec![BigRational::zero(); dim2]; dim1]; dim1],
        }
    }

    pub fn bracket_vec(&self, u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim0];
        for i in 0..self.dim0 {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim0 {
                if v[j].is_zero() {
                    continue;
                }
                for k in 0..self.dim0 {
                    out[k] = &out[k] + &(&(&u[i] * &v[j]) * &self.bracket[i][j][k]);
                }
            }
        }
        out
    }
}

/// Jacobi for 𝔤₀, representation property for ρ₁, ρ₂, skewness of ⟨,⟩,
/// and the relation `ρ₂(a)⟨ξ₁,ξ₂⟩ = ⟨ρ₁(a)ξ₁,ξ₂⟩ + ⟨ξ₁,ρ₁(a)ξ₂⟩`.
pub fn validate_triolic_lie_algebra(l: &TriolicLieAlgebraData) -> ValidationReport {
    // bracket antisymmetry
    for i in 0..l.dim0 {
        for j in 0..l.dim0 {
            for k in 0..l.dim0 {
                if l.bracket[i][j][k] != -l.bracket[j][i][k].clone() {
                    return ValidationReport::fail(Witness::new(
                        "bracket antisymmetry",
                        vec![i + 1, j + 1, k + 1],
                    ));
                }
            }
        }
    }
    // Jacobi on basis triples
    for i in 0..l.dim0 {
        for j in 0..l.dim0 {
            for k in 0..l.dim0 {
                let ei: Vec<BigRational> = basis(l.dim0, i);
                let ej: Vec<BigRational> = basis(l.dim0, j);
                let ek: Vec<BigRational> = basis(l.dim0, k);
                let mut jac = l.bracket_vec(&ei, &l.bracket_vec(&ej, &ek));
                let t2 = l.bracket_vec(&ej, &l.bracket_vec(&ek, &ei));
                let t3 = l.bracket_vec(&ek, &l.bracket_vec(&ei, &ej));
                for c in 0..l.dim0 {
                    jac[c] = &jac[c] + &(&t2[c] + &t3[c]);
                }
                if jac.iter().any(|x| !x.is_zero()) {
                    return ValidationReport::fail(Witness::new(
                        "Jacobi identity",
                        vec![i + 1, j + 1, k + 1],
                    ));
                }
            }
        }
    }
    // representation property: ρ([e_i,e_j]) = [ρ(e_i), ρ(e_j)]
    for (name, rho) in [("ρ₁", &l.rho1), ("ρ₂", &l.rho2)] {
        for i in 0..l.dim0 {
            for j in 0..l.dim0 {
                let comm = mat_sub(&mat_mul(&rho[i], &rho[j]), &mat_mul(&rho[j], &rho[i]));
                let coeffs: Vec<BigRational> =
                    (0..l.dim0).map(|k| l.bracket[i][j][k].clone()).collect();
                let lhs = lin_comb(&coeffs, rho);
                if !mat_is_zero(&mat_sub(&lhs, &comm)) {
                    return ValidationReport::fail(Witness::with_detail(
                        "representation property",
                        vec![i + 1, j + 1],
                        name.to_string(),
                    ));
                }
            }
        }
    }
    // skewness of the pairing
    for a in 0..l.dim1 {
        for b in 0..l.dim1 {
            for c in 0..l.dim2 {
                if l.pairing[a][b][c] != -l.pairing[b][a][c].clone() {
                    return ValidationReport::fail(Witness::new(
                        "pairing skewness",
                        vec![a + 1, b + 1, c + 1],
                    ));
                }
            }
        }
    }
    // ρ-compatibility
    for i in 0..l.dim0 {
        for a in 0..l.dim1 {
            for b in 0..l.dim1 {
                let pair_ab: Vec<BigRational> =
                    (0..l.dim2).map(|c| l.pairing[a][b][c].clone()).collect();
                let lhs = mat_vec(&l.rho2[i], &pair_ab);
                // ⟨ρ₁(e_i) f_a, f_b⟩ + ⟨f_a, ρ₁(e_i) f_b⟩
                let mut rhs = vec![BigRational::zero(); l.dim2];
                for s in 0..l.dim1 {
                    for c in 0..l.dim2 {
                        rhs[c] = &rhs[c] + &(&l.rho1[i][s][a] * &l.pairing[s][b][c]);
                        rhs[c] = &rhs[c] + &(&l.rho1[i][s][b] * &l.pairing[a][s][c]);
                    }
                }
                if lhs.iter().zip(&rhs).any(|(x, y)| x != y) {
                    return ValidationReport::fail(Witness::new(
                        "ρ-compatibility",
                        vec![i + 1, a + 1, b + 1],
                    ));
                }
            }
        }
    }
    ValidationReport::ok()
}

fn basis(dim: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::from_integer(1.into());
    v
}
