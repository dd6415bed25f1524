//! Exact multivariate polynomials over ℚ and scalar derivations of the
//! coordinate ring.
//!
//! Terms are stored in a `BTreeMap` keyed by graded-lexicographic monomial
//! order, so iteration (and therefore serialization) is canonical. Zero
//! coefficients are never stored.

use crate::CalcError;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent multi-index. Ordered graded-lexicographically: total degree
/// first, then lexicographic on the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, axis: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[axis] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise divisibility.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `ℚ[x₁..xₙ]` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, BigRational::one())
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(n_vars), c);
        }
        p
    }

    pub fn from_int(n_vars: usize, c: i64) -> Self {
        Poly::constant(n_vars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_{axis+1}` (0-based axis).
    pub fn var(n_vars: usize, axis: usize) -> Self {
        assert!(axis < n_vars, "axis out of range");
        let mut p = Poly::zero(n_vars);
        p.terms
            .insert(Monomial::var(n_vars, axis), BigRational::one());
        p
    }

    pub fn monomial(n_vars: usize, exps: &[u32], coeff: BigRational) -> Self {
        assert_eq!(exps.len(), n_vars);
        let mut p = Poly::zero(n_vars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial(exps.to_vec()), coeff);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree() == 0
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::unit(self.n_vars))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Exact partial derivative along `axis` (0-based).
    pub fn partial_derivative(&self, axis: usize) -> Result<Poly, CalcError> {
        if axis >= self.n_vars {
            return Err(CalcError::AxisOutOfRange {
                axis,
                n_vars: self.n_vars,
            });
        }
        let mut out = Poly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[axis];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[axis] -= 1;
            out.insert_term(
                Monomial(exps),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        Ok(out)
    }

    /// Iterated partial derivative `∂^σ`.
    pub fn derive_multi(&self, sigma: &Monomial) -> Poly {
        let mut p = self.clone();
        for (axis, &e) in sigma.0.iter().enumerate() {
            for _ in 0..e {
                p = p.partial_derivative(axis).expect("axis in range");
            }
        }
        p
    }

    /// Substitute `x_i ↦ images[i]`; the images live in a (possibly
    /// different) polynomial ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, CalcError> {
        if images.len() != self.n_vars {
            return Err(CalcError::MalformedSubstitution(format!(
                "expected {} images, got {}",
                self.n_vars,
                images.len()
            )));
        }
        let target_n = if images.is_empty() {
            self.n_vars
        } else {
            images[0].n_vars
        };
        for im in images {
            if im.n_vars != target_n {
                return Err(CalcError::MalformedSubstitution(
                    "images live in different rings".into(),
                ));
            }
        }
        let mut out = Poly::zero(target_n);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_n, c.clone());
            for (axis, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &images[axis];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact division, panicking if `divisor` does not divide `self`.
    /// Used by fraction-free linear algebra where divisibility is
    /// guaranteed.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.n_vars);
        let (dm, dc) = divisor
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem
                .terms
                .iter()
                .next_back()
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            assert!(
                dm.divides(&rm),
                "exact_div: leading term not divisible (inexact division)"
            );
            let qm = rm.div(&dm);
            let qc = rc / &dc;
            let t = Poly::monomial(self.n_vars, &qm.0, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        quot
    }

    /// Extend the ring by `extra` fresh variables appended at the end.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        let n = self.n_vars + extra;
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.extend(std::iter::repeat_n(0, extra));
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars, "ring mismatch in +");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars, "ring mismatch in -");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars, "ring mismatch in *");
        let mut out = Poly::zero(self.n_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_unit_mono = m.degree() == 0;
            if !abs.is_one() || is_unit_mono {
                write!(f, "{}", abs)?;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// A derivation `X = Σ Xⁱ ∂ᵢ` of the coordinate ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarDerivation {
    pub coeffs: Vec<Poly>,
}

impl ScalarDerivation {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        let n = coeffs.len();
        for c in &coeffs {
            assert_eq!(c.n_vars(), n, "coefficient ring mismatch");
        }
        ScalarDerivation { coeffs }
    }

    pub fn zero(n_vars: usize) -> Self {
        ScalarDerivation {
            coeffs: vec![Poly::zero(n_vars); n_vars],
        }
    }

    /// The coordinate field `∂_axis`.
    pub fn partial(n_vars: usize, axis: usize) -> Self {
        let mut coeffs = vec![Poly::zero(n_vars); n_vars];
        coeffs[axis] = Poly::one(n_vars);
        ScalarDerivation { coeffs }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        let n = self.n_vars();
        assert_eq!(f.n_vars(), n, "ring mismatch");
        let mut out = Poly::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &(c * &f.partial_derivative(i).unwrap());
        }
        out
    }

    pub fn add(&self, other: &ScalarDerivation) -> ScalarDerivation {
        ScalarDerivation::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ScalarDerivation) -> ScalarDerivation {
        ScalarDerivation::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, f: &Poly) -> ScalarDerivation {
        ScalarDerivation::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    /// `[X, Y]` as a derivation: coefficients `X(Yʲ) − Y(Xʲ)`.
    pub fn commutator(&self, other: &ScalarDerivation) -> ScalarDerivation {
        ScalarDerivation::new(
            (0..self.n_vars())
                .map(|j| &self.apply(&other.coeffs[j]) - &other.apply(&self.coeffs[j]))
                .collect(),
        )
    }
}

/// All monomials of total degree ≤ `max_deg` in graded-lex order.
pub fn monomials_up_to(n_vars: usize, max_deg: u32) -> Vec<Monomial> {
    fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    rec(&mut out, &mut cur, 0, max_deg);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn partial_derivative_power_rule() {
        // (x1^2 x2, axis 1) -> 2 x1 x2
        let p = &(&x(2, 0) * &x(2, 0)) * &x(2, 1);
        let d = p.partial_derivative(0).unwrap();
        let expected = (&x(2, 0) * &x(2, 1)).scale_int(2);
        assert_eq!(d, expected);
    }

    #[test]
    fn partial_derivative_of_constant_is_zero() {
        let p = Poly::from_int(2, 5);
        assert!(p.partial_derivative(0).unwrap().is_zero());
    }

    #[test]
    fn partial_derivative_second_axis() {
        // x1^3 + x2, axis 2 -> 1
        let p = &(&(&x(2, 0) * &x(2, 0)) * &x(2, 0)) + &x(2, 1);
        assert_eq!(p.partial_derivative(1).unwrap(), Poly::one(2));
    }

    #[test]
    fn partial_derivative_axis_out_of_range() {
        let p = x(2, 0);
        assert!(matches!(
            p.partial_derivative(2),
            Err(CalcError::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn no_zero_coefficients_stored() {
        let p = &x(2, 0) - &x(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn graded_lex_ordering() {
        let m1 = Monomial(vec![2, 0]);
        let m2 = Monomial(vec![0, 1]);
        // degree 2 > degree 1
        assert!(m1 > m2);
        let m3 = Monomial(vec![1, 1]);
        // same degree: lex on exponents, (2,0) > (1,1)
        assert!(m1 > m3);
    }

    #[test]
    fn exact_div_recovers_factor() {
        let a = &(&x(2, 0) + &x(2, 1)) * &(&x(2, 0) - &Poly::from_int(2, 3));
        let q = a.exact_div(&(&x(2, 0) + &x(2, 1)));
        assert_eq!(q, &x(2, 0) - &Poly::from_int(2, 3));
    }

    #[test]
    fn substitution() {
        // g = x1, x1 -> y1^2
        let g = x(1, 0);
        let y1sq = &x(1, 0) * &x(1, 0);
        assert_eq!(g.substitute(std::slice::from_ref(&y1sq)).unwrap(), y1sq);
    }

    #[test]
    fn derivation_commutator() {
        // [∂1, x1∂1] = ∂1
        let d1 = ScalarDerivation::partial(2, 0);
        let xd1 = d1.scale(&x(2, 0));
        assert_eq!(d1.commutator(&xd1), d1);
    }

    #[test]
    fn monomials_enumeration() {
        let ms = monomials_up_to(2, 2);
        assert_eq!(ms.len(), 6); // 1, x2, x1, x2^2, x1x2, x1^2
        assert!(ms.iter().all(|m| m.degree() <= 2));
    }
}
