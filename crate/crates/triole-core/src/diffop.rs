//! Normal-ordered linear differential operators, scalar and matrix valued.
//!
//! A `PolyDiffOp` is `Σ_σ c_σ(x) ∂^σ` with all coefficients to the left.
//! In this representation the order is the largest `|σ|` present, the
//! principal symbol is a coefficient read-off, and `δₐ = a∘Δ − Δ∘a` is
//! computed exactly, so the abstract order-`k` criterion
//! `δ_{a₀..a_k}(Δ) = 0` becomes decidable.

use crate::poly::{Monomial, Poly};
use crate::symbol::SymbolTensor;
use crate::{CalcError, ScalarDerivation};
use num::{BigInt, BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Scalar linear differential operator in normal-ordered form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDiffOp {
    n_vars: usize,
    terms: BTreeMap<Monomial, Poly>,
}

fn binom(n: u32, k: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// Product of binomial coefficients over the components of σ, τ.
fn multi_binom(sigma: &Monomial, tau: &Monomial) -> BigRational {
    sigma
        .0
        .iter()
        .zip(&tau.0)
        .map(|(&s, &t)| binom(s, t))
        .fold(BigRational::one(), |a, b| a * b)
}

/// All τ with τ ≤ σ componentwise.
fn sub_multi_indices(sigma: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial(vec![])];
    for &s in &sigma.0 {
        let mut next = Vec::with_capacity(out.len() * (s as usize + 1));
        for m in &out {
            for e in 0..=s {
                let mut v = m.0.clone();
                v.push(e);
                next.push(Monomial(v));
            }
        }
        out = next;
    }
    out
}

impl PolyDiffOp {
    pub fn zero(n_vars: usize) -> Self {
        PolyDiffOp {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_vars: usize) -> Self {
        PolyDiffOp::mult(&Poly::one(n_vars))
    }

    /// The operator of multiplication by `a`.
    pub fn mult(a: &Poly) -> Self {
        let mut op = PolyDiffOp::zero(a.n_vars());
        op.insert_term(Monomial::unit(a.n_vars()), a.clone());
        op
    }

    /// `∂^σ` with unit coefficient.
    pub fn derivative(n_vars: usize, sigma: &[u32]) -> Self {
        assert_eq!(sigma.len(), n_vars);
        let mut op = PolyDiffOp::zero(n_vars);
        op.insert_term(Monomial(sigma.to_vec()), Poly::one(n_vars));
        op
    }

    pub fn partial(n_vars: usize, axis: usize) -> Self {
        let mut sigma = vec![0u32; n_vars];
        sigma[axis] = 1;
        PolyDiffOp::derivative(n_vars, &sigma)
    }

    pub fn from_derivation(x: &ScalarDerivation) -> Self {
        let n = x.n_vars();
        let mut op = PolyDiffOp::zero(n);
        for (i, c) in x.coeffs.iter().enumerate() {
            op.insert_term(Monomial::var(n, i), c.clone());
        }
        op
    }

    /// Decompose an order ≤ 1 operator into derivation + multiplication
    /// parts. Panics if the order exceeds 1.
    pub fn split_first_order(&self) -> (ScalarDerivation, Poly) {
        assert!(self.order() <= 1, "operator has order > 1");
        let mut coeffs = vec![Poly::zero(self.n_vars); self.n_vars];
        let mut constant = Poly::zero(self.n_vars);
        for (sigma, c) in &self.terms {
            if sigma.degree() == 0 {
                constant = c.clone();
            } else {
                let axis = sigma.0.iter().position(|&e| e == 1).unwrap();
                coeffs[axis] = c.clone();
            }
        }
        (ScalarDerivation::new(coeffs), constant)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, sigma: Monomial, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(sigma) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Minimal k with all (k+1)-fold δ's vanishing; by normal ordering
    /// this is the largest |σ| present. Zero operator has order 0 by
    /// convention.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.degree() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        assert_eq!(f.n_vars(), self.n_vars, "ring mismatch");
        let mut out = Poly::zero(self.n_vars);
        for (sigma, c) in &self.terms {
            out = &out + &(c * &f.derive_multi(sigma));
        }
        out
    }

    pub fn add(&self, other: &PolyDiffOp) -> PolyDiffOp {
        assert_eq!(self.n_vars, other.n_vars, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyDiffOp) -> PolyDiffOp {
        self.add(&other.scale_int(-1))
    }

    pub fn scale(&self, c: &BigRational) -> PolyDiffOp {
        if c.is_zero() {
            return PolyDiffOp::zero(self.n_vars);
        }
        PolyDiffOp {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, p)| (m.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> PolyDiffOp {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn scale_poly(&self, f: &Poly) -> PolyDiffOp {
        let mut out = PolyDiffOp::zero(self.n_vars);
        for (m, p) in &self.terms {
            out.insert_term(m.clone(), p * f);
        }
        out
    }

    /// Normal-ordered composition: `self` applied after `rhs`.
    /// `∂^σ ∘ c = Σ_{τ≤σ} C(σ,τ) ∂^τ(c) ∂^{σ−τ}`.
    pub fn compose(&self, rhs: &PolyDiffOp) -> Result<PolyDiffOp, CalcError> {
        if self.n_vars != rhs.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: rhs.n_vars,
            });
        }
        let mut out = PolyDiffOp::zero(self.n_vars);
        for (s1, c1) in &self.terms {
            for (s2, c2) in &rhs.terms {
                for tau in sub_multi_indices(s1) {
                    let dc2 = c2.derive_multi(&tau);
                    if dc2.is_zero() {
                        continue;
                    }
                    let coeff = &(c1 * &dc2).scale(&multi_binom(s1, &tau));
                    out.insert_term(s1.div(&tau).mul(s2), coeff.clone());
                }
            }
        }
        Ok(out)
    }

    /// `Δ∘∇ − ∇∘Δ`.
    pub fn commutator(&self, rhs: &PolyDiffOp) -> Result<PolyDiffOp, CalcError> {
        Ok(self.compose(rhs)?.sub(&rhs.compose(self)?))
    }

    /// `δₐ(Δ) = a∘Δ − Δ∘a` with both factors read as multiplication
    /// operators.
    pub fn delta_a(&self, a: &Poly) -> Result<PolyDiffOp, CalcError> {
        if a.n_vars() != self.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: a.n_vars(),
            });
        }
        let ma = PolyDiffOp::mult(a);
        Ok(ma.compose(self)?.sub(&self.compose(&ma)?))
    }

    /// Iterated δ over a tuple of ring elements.
    pub fn delta_tuple(&self, tuple: &[Poly]) -> Result<PolyDiffOp, CalcError> {
        let mut op = self.clone();
        for a in tuple {
            op = op.delta_a(a)?;
        }
        Ok(op)
    }

    /// Terms of exact order `k`.
    pub fn top_part(&self, k: usize) -> PolyDiffOp {
        PolyDiffOp {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() as usize == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The coset of Δ in `Diff_k / Diff_{k−1}` as a ξ-polynomial; zero
    /// symbol iff the order drops below k.
    pub fn principal_symbol(&self, k: usize) -> Result<SymbolTensor, CalcError> {
        if self.order() > k {
            return Err(CalcError::OrderExceeded {
                order: self.order(),
                requested: k,
            });
        }
        let mut body = Poly::zero(2 * self.n_vars);
        for (sigma, c) in self.top_part(k).terms() {
            let mut xi = Poly::constant(2 * self.n_vars, BigRational::one());
            for (axis, &e) in sigma.0.iter().enumerate() {
                for _ in 0..e {
                    xi = &xi * &Poly::var(2 * self.n_vars, self.n_vars + axis);
                }
            }
            body = &body + &(&c.extend_vars(self.n_vars) * &xi);
        }
        SymbolTensor::scalar(self.n_vars, k, body)
    }
}

impl fmt::Display for PolyDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (sigma, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, &e) in sigma.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "∂{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Rectangular matrix of scalar differential operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatDiffOp {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<PolyDiffOp>,
    n_vars: usize,
}

impl MatDiffOp {
    pub fn zero(n_vars: usize, rows: usize, cols: usize) -> Self {
        MatDiffOp {
            rows,
            cols,
            entries: vec![PolyDiffOp::zero(n_vars); rows * cols],
            n_vars,
        }
    }

    pub fn from_fn(
        n_vars: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> PolyDiffOp,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert_eq!(e.n_vars(), n_vars, "ring mismatch in entry");
                entries.push(e);
            }
        }
        MatDiffOp {
            rows,
            cols,
            entries,
            n_vars,
        }
    }

    /// `op · Id` on a square shape.
    pub fn scalar_diag(op: &PolyDiffOp, size: usize) -> Self {
        MatDiffOp::from_fn(op.n_vars(), size, size, |r, c| {
            if r == c {
                op.clone()
            } else {
                PolyDiffOp::zero(op.n_vars())
            }
        })
    }

    /// Order-0 operator of multiplication by a polynomial matrix.
    pub fn from_poly_matrix(m: &[Vec<Poly>]) -> Self {
        let rows = m.len();
        let cols = m[0].len();
        let n = m[0][0].n_vars();
        MatDiffOp::from_fn(n, rows, cols, |r, c| PolyDiffOp::mult(&m[r][c]))
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn entry(&self, r: usize, c: usize) -> &PolyDiffOp {
        &self.entries[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut PolyDiffOp {
        &mut self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn order(&self) -> usize {
        self.entries.iter().map(|e| e.order()).max().unwrap_or(0)
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Poly::zero(self.n_vars);
                for c in 0..self.cols {
                    acc = &acc + &self.entry(r, c).apply(&v[c]);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &MatDiffOp) -> MatDiffOp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatDiffOp::from_fn(self.n_vars, self.rows, self.cols, |r, c| {
            self.entry(r, c).add(other.entry(r, c))
        })
    }

    pub fn sub(&self, other: &MatDiffOp) -> MatDiffOp {
        self.add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, k: i64) -> MatDiffOp {
        MatDiffOp::from_fn(self.n_vars, self.rows, self.cols, |r, c| {
            self.entry(r, c).scale_int(k)
        })
    }

    pub fn scale_poly(&self, f: &Poly) -> MatDiffOp {
        MatDiffOp::from_fn(self.n_vars, self.rows, self.cols, |r, c| {
            self.entry(r, c).scale_poly(f)
        })
    }

    pub fn compose(&self, rhs: &MatDiffOp) -> Result<MatDiffOp, CalcError> {
        if self.cols != rhs.rows {
            return Err(CalcError::ShapeMismatch(format!(
                "{}×{} ∘ {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.n_vars != rhs.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: rhs.n_vars,
            });
        }
        let mut out = MatDiffOp::zero(self.n_vars, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = PolyDiffOp::zero(self.n_vars);
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(r, k).compose(rhs.entry(k, c))?);
                }
                *out.entry_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, rhs: &MatDiffOp) -> Result<MatDiffOp, CalcError> {
        Ok(self.compose(rhs)?.sub(&rhs.compose(self)?))
    }

    /// Entrywise `δₐ`; multiplication by a scalar commutes with the
    /// matrix structure.
    pub fn delta_a(&self, a: &Poly) -> Result<MatDiffOp, CalcError> {
        if a.n_vars() != self.n_vars {
            return Err(CalcError::RingMismatch {
                expected: self.n_vars,
                got: a.n_vars(),
            });
        }
        let mut out = MatDiffOp::zero(self.n_vars, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.entry_mut(r, c) = self.entry(r, c).delta_a(a)?;
            }
        }
        Ok(out)
    }

    pub fn delta_tuple(&self, tuple: &[Poly]) -> Result<MatDiffOp, CalcError> {
        let mut m = self.clone();
        for a in tuple {
            m = m.delta_a(a)?;
        }
        Ok(m)
    }

    pub fn top_part(&self, k: usize) -> MatDiffOp {
        MatDiffOp::from_fn(self.n_vars, self.rows, self.cols, |r, c| {
            self.entry(r, c).top_part(k)
        })
    }

    /// Extract the order-0 part as a polynomial matrix.
    pub fn order0_matrix(&self) -> Vec<Vec<Poly>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        self.entry(r, c)
                            .terms()
                            .find(|(m, _)| m.degree() == 0)
                            .map(|(_, p)| p.clone())
                            .unwrap_or_else(|| Poly::zero(self.n_vars))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn principal_symbol(&self, k: usize) -> Result<SymbolTensor, CalcError> {
        if self.order() > k {
            return Err(CalcError::OrderExceeded {
                order: self.order(),
                requested: k,
            });
        }
        let mut body = Vec::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                body.push(self.entry(r, c).principal_symbol(k)?.into_scalar_body());
            }
        }
        SymbolTensor::matrix(self.n_vars, k, self.rows, self.cols, body)
    }
}
