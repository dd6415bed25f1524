//! Principal symbols as ξ-polynomials and the induced commutative ⋆
//! algebra with its Poisson bracket.
//!
//! A symbol of order k lives in `ℚ[x₁..xₙ, ξ₁..ξₙ]`, homogeneous of
//! degree exactly k in the ξ's; a matrix part carries module-valued
//! symbols. The ⋆ product is the coset product `smbl(Δ)⋆smbl(∇) =
//! smbl(Δ∘∇)`; on ξ-polynomials it is plain multiplication.

use crate::diffop::{MatDiffOp, PolyDiffOp};
use crate::poly::{Monomial, Poly};
use crate::CalcError;

/// Order-k symbol with an optional matrix shape (scalars are 1×1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTensor {
    n_vars: usize,
    degree_k: usize,
    rows: usize,
    cols: usize,
    /// Row-major entries in `ℚ[x, ξ]` (2·n_vars variables).
    body: Vec<Poly>,
}

fn xi_degree(m: &Monomial, n: usize) -> u32 {
    m.0[n..].iter().sum()
}

impl SymbolTensor {
    pub fn scalar(n_vars: usize, degree_k: usize, body: Poly) -> Result<Self, CalcError> {
        SymbolTensor::matrix(n_vars, degree_k, 1, 1, vec![body])
    }

    pub fn matrix(
        n_vars: usize,
        degree_k: usize,
        rows: usize,
        cols: usize,
        body: Vec<Poly>,
    ) -> Result<Self, CalcError> {
        if body.len() != rows * cols {
            return Err(CalcError::ShapeMismatch(format!(
                "symbol body has {} entries for shape {}×{}",
                body.len(),
                rows,
                cols
            )));
        }
        for p in &body {
            if p.n_vars() != 2 * n_vars {
                return Err(CalcError::RingMismatch {
                    expected: 2 * n_vars,
                    got: p.n_vars(),
                });
            }
            for (m, _) in p.terms() {
                if xi_degree(m, n_vars) as usize != degree_k {
                    return Err(CalcError::SymbolDegreeMismatch(format!(
                        "term is not ξ-homogeneous of degree {}",
                        degree_k
                    )));
                }
            }
        }
        Ok(SymbolTensor {
            n_vars,
            degree_k,
            rows,
            cols,
            body,
        })
    }

    pub fn zero(n_vars: usize, degree_k: usize) -> Self {
        SymbolTensor {
            n_vars,
            degree_k,
            rows: 1,
            cols: 1,
            body: vec![Poly::zero(2 * n_vars)],
        }
    }

    /// The unit symbol (k = 0, body 1).
    pub fn one(n_vars: usize) -> Self {
        SymbolTensor {
            n_vars,
            degree_k: 0,
            rows: 1,
            cols: 1,
            body: vec![Poly::one(2 * n_vars)],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> usize {
        self.degree_k
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly {
        &self.body[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.body.iter().all(|p| p.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn into_scalar_body(self) -> Poly {
        assert!(self.is_scalar(), "symbol is matrix-valued");
        self.body.into_iter().next().unwrap()
    }

    pub fn scalar_body(&self) -> &Poly {
        assert!(self.is_scalar(), "symbol is matrix-valued");
        &self.body[0]
    }

    pub fn add(&self, other: &SymbolTensor) -> Result<SymbolTensor, CalcError> {
        if self.n_vars != other.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        if self.degree_k != other.degree_k || (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(CalcError::SymbolDegreeMismatch(
                "addition needs equal order and shape".into(),
            ));
        }
        let body = self
            .body
            .iter()
            .zip(&other.body)
            .map(|(a, b)| a + b)
            .collect();
        SymbolTensor::matrix(self.n_vars, self.degree_k, self.rows, self.cols, body)
    }

    pub fn scale_int(&self, k: i64) -> SymbolTensor {
        SymbolTensor {
            n_vars: self.n_vars,
            degree_k: self.degree_k,
            rows: self.rows,
            cols: self.cols,
            body: self.body.iter().map(|p| p.scale_int(k)).collect(),
        }
    }

    /// ⋆ product: commutative on scalars; matrix product on compatible
    /// shapes. Orders add.
    pub fn star(&self, other: &SymbolTensor) -> Result<SymbolTensor, CalcError> {
        if self.n_vars != other.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        let k = self.degree_k + other.degree_k;
        if self.is_scalar() || other.is_scalar() {
            let (m, s) = if self.is_scalar() {
                (other, self)
            } else {
                (self, other)
            };
            let body = m.body.iter().map(|p| p * &s.body[0]).collect();
            return SymbolTensor::matrix(self.n_vars, k, m.rows, m.cols, body);
        }
        if self.cols != other.rows {
            return Err(CalcError::ShapeMismatch(format!(
                "{}×{} ⋆ {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut body = vec![Poly::zero(2 * self.n_vars); self.rows * other.cols];
        for r in 0..self.rows {
            for c in 0..other.cols {
                for l in 0..self.cols {
                    body[r * other.cols + c] =
                        &body[r * other.cols + c] + &(self.entry(r, l) * other.entry(l, c));
                }
            }
        }
        SymbolTensor::matrix(self.n_vars, k, self.rows, other.cols, body)
    }

    /// Canonical Poisson bracket `{s,t} = Σᵢ ∂s/∂ξᵢ ∂t/∂xᵢ − ∂s/∂xᵢ ∂t/∂ξᵢ`
    /// on scalar symbols; equals `smbl_{k+ℓ−1}([Δ,∇])` for any
    /// representatives.
    pub fn poisson(&self, other: &SymbolTensor) -> Result<SymbolTensor, CalcError> {
        if self.n_vars != other.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        if !self.is_scalar() || !other.is_scalar() {
            return Err(CalcError::ShapeMismatch(
                "poisson bracket defined on scalar symbols".into(),
            ));
        }
        let n = self.n_vars;
        let s = &self.body[0];
        let t = &other.body[0];
        let mut out = Poly::zero(2 * n);
        for i in 0..n {
            let ds_dxi = s.partial_derivative(n + i).unwrap();
            let dt_dx = t.partial_derivative(i).unwrap();
            let ds_dx = s.partial_derivative(i).unwrap();
            let dt_dxi = t.partial_derivative(n + i).unwrap();
            out = &out + &(&(&ds_dxi * &dt_dx) - &(&ds_dx * &dt_dxi));
        }
        let k = (self.degree_k + other.degree_k).saturating_sub(1);
        SymbolTensor::matrix(n, k, 1, 1, vec![out])
    }

    /// Canonical normal-ordered representative: ξ^σ monomials become
    /// coefficient·∂^σ. `principal_symbol(lift, k)` returns the symbol
    /// back, which makes this the oracle lift for coset identities.
    pub fn lift_to_operator(&self) -> MatDiffOp {
        let n = self.n_vars;
        MatDiffOp::from_fn(n, self.rows, self.cols, |r, c| {
            let mut op = PolyDiffOp::zero(n);
            for (m, coeff) in self.entry(r, c).terms() {
                let x_part = Poly::monomial(n, &m.0[..n], coeff.clone());
                let sigma: Vec<u32> = m.0[n..].to_vec();
                op = op.add(&PolyDiffOp::derivative(n, &sigma).scale_poly(&x_part));
            }
            op
        })
    }
}

/// The Hamiltonian derivation `H_s = {s, −}` of the symbol algebra.
#[derive(Debug, Clone)]
pub struct HamiltonianDerivation {
    hamiltonian: SymbolTensor,
}

pub fn hamiltonian_derivation(s: &SymbolTensor) -> HamiltonianDerivation {
    HamiltonianDerivation {
        hamiltonian: s.clone(),
    }
}

impl HamiltonianDerivation {
    pub fn apply(&self, t: &SymbolTensor) -> Result<SymbolTensor, CalcError> {
        self.hamiltonian.poisson(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(n: usize, i: usize) -> Poly {
        Poly::var(2 * n, n + i)
    }

    fn xvar(n: usize, i: usize) -> Poly {
        Poly::var(2 * n, i)
    }

    #[test]
    fn star_examples() {
        let n = 2;
        // ξ1 ⋆ x1ξ2 = x1ξ1ξ2; oracle: compose ∂1 and x1∂2, take order-2 part
        let s = SymbolTensor::scalar(n, 1, xi(n, 0)).unwrap();
        let t = SymbolTensor::scalar(n, 1, &xvar(n, 0) * &xi(n, 1)).unwrap();
        let got = s.star(&t).unwrap();
        let expect = &(&xvar(n, 0) * &xi(n, 0)) * &xi(n, 1);
        assert_eq!(got.clone().into_scalar_body(), expect);
        let op_s = PolyDiffOp::partial(n, 0);
        let op_t = PolyDiffOp::partial(n, 1).scale_poly(&Poly::var(n, 0));
        let composed = op_s.compose(&op_t).unwrap();
        assert_eq!(composed.principal_symbol(2).unwrap(), got);
        // s ⋆ 1 = s
        assert_eq!(s.star(&SymbolTensor::one(n)).unwrap(), s);
        // ξ1 ⋆ ξ1 = ξ1²
        let sq = s.star(&s).unwrap();
        assert_eq!(sq.into_scalar_body(), &xi(n, 0) * &xi(n, 0));
    }

    #[test]
    fn poisson_examples() {
        let n = 2;
        let s = SymbolTensor::scalar(n, 1, xi(n, 0)).unwrap();
        let t = SymbolTensor::scalar(n, 1, &xvar(n, 0) * &xi(n, 1)).unwrap();
        // {ξ1, x1ξ2} = ξ2 (commutator oracle: [∂1, x1∂2] = ∂2)
        let got = s.poisson(&t).unwrap();
        assert_eq!(got.clone().into_scalar_body(), xi(n, 1));
        let op_s = PolyDiffOp::partial(n, 0);
        let op_t = PolyDiffOp::partial(n, 1).scale_poly(&Poly::var(n, 0));
        let comm = op_s.commutator(&op_t).unwrap();
        assert_eq!(comm.principal_symbol(1).unwrap(), got);
        // {ξ1, ξ2} = 0
        let t2 = SymbolTensor::scalar(n, 1, xi(n, 1)).unwrap();
        assert!(s.poisson(&t2).unwrap().is_zero());
        // {s, s} = 0
        assert!(t.poisson(&t).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_examples() {
        let n = 2;
        let s = SymbolTensor::scalar(n, 1, xi(n, 0)).unwrap();
        let h = hamiltonian_derivation(&s);
        let t = SymbolTensor::scalar(n, 1, &xvar(n, 0) * &xi(n, 1)).unwrap();
        // H_ξ1(x1ξ2) = ξ2
        assert_eq!(h.apply(&t).unwrap().into_scalar_body(), xi(n, 1));
        // H_s(1) = 0
        assert!(h.apply(&SymbolTensor::one(n)).unwrap().is_zero());
        // Leibniz on a square: H(t⋆t) = 2 t⋆H(t)
        let tt = t.star(&t).unwrap();
        let lhs = h.apply(&tt).unwrap();
        let rhs = t.star(&h.apply(&t).unwrap()).unwrap().scale_int(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn xi_homogeneity_enforced() {
        let n = 2;
        let bad = &xi(n, 0) + &Poly::one(2 * n);
        assert!(SymbolTensor::scalar(n, 1, bad).is_err());
    }

    #[test]
    fn lift_roundtrip() {
        let n = 2;
        let body = &(&xvar(n, 1) * &xi(n, 0)) * &xi(n, 0);
        let s = SymbolTensor::scalar(n, 2, body).unwrap();
        let lifted = s.lift_to_operator();
        assert_eq!(lifted.principal_symbol(2).unwrap(), s);
    }
}
