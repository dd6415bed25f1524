//! Exact linear algebra over the fraction field of `ℚ[x₁..xₙ]` and over ℚ.
//!
//! The fraction-field routines keep numerator/denominator pairs without
//! gcd reduction (sizes stay small at the ranks used here) and clear
//! denominators on output, so callers only ever see polynomial data.

use crate::poly::Poly;
use crate::CalcError;
use num::{BigRational, One, Zero};

/// Unreduced fraction of polynomials. `den` is never zero.
#[derive(Debug, Clone)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn from_poly(p: &Poly) -> Self {
        Frac {
            den: Poly::one(p.n_vars()),
            num: p.clone(),
        }
    }

    fn zero(n: usize) -> Self {
        Frac {
            num: Poly::zero(n),
            den: Poly::one(n),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.n_vars());
        } else if self.den.is_constant() {
            let c = self.den.constant_term();
            self.num = self.num.scale(&(BigRational::one() / c));
            self.den = Poly::one(self.num.n_vars());
        }
        self
    }

    fn sub_mul(&self, factor: &Frac, other: &Frac) -> Frac {
        // self − factor·other
        let num =
            &(&self.num * &(&factor.den * &other.den)) - &(&(&factor.num * &other.num) * &self.den);
        let den = &self.den * &(&factor.den * &other.den);
        Frac { num, den }.normalize()
    }

    fn add(&self, other: &Frac) -> Frac {
        Frac {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
        .normalize()
    }

    fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn div(&self, other: &Frac) -> Frac {
        assert!(!other.is_zero(), "division by zero fraction");
        Frac {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        }
        .normalize()
    }

    fn mul(&self, other: &Frac) -> Frac {
        Frac {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
        .normalize()
    }
}

/// Dense matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>,
    n_vars: usize,
}

impl PolyMatrix {
    pub fn new(n_vars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(n_vars); rows * cols],
            n_vars,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let n = rows
            .first()
            .and_then(|v| v.first())
            .map(|p| p.n_vars())
            .unwrap_or(0);
        let mut m = PolyMatrix::new(n, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, p) in row.into_iter().enumerate() {
                assert_eq!(p.n_vars(), n, "ring mismatch");
                *m.entry_mut(i, j) = p;
            }
        }
        m
    }

    pub fn identity(n_vars: usize, size: usize) -> Self {
        let mut m = PolyMatrix::new(n_vars, size, size);
        for i in 0..size {
            *m.entry_mut(i, i) = Poly::one(n_vars);
        }
        m
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Poly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<Poly> {
        (0..self.cols).map(|c| self.entry(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::new(self.n_vars, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.entry_mut(c, r) = self.entry(r, c).clone();
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = PolyMatrix::new(self.n_vars, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Poly::zero(self.n_vars);
                for k in 0..self.cols {
                    acc = &acc + &(self.entry(r, k) * other.entry(k, c));
                }
                *out.entry_mut(r, c) = acc;
            }
        }
        out
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Poly::zero(self.n_vars);
                for c in 0..self.cols {
                    acc = &acc + &(self.entry(r, c) * &v[c]);
                }
                acc
            })
            .collect()
    }

    fn to_fracs(&self) -> Vec<Vec<Frac>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| Frac::from_poly(self.entry(r, c)))
                    .collect()
            })
            .collect()
    }

    /// Row echelon over the fraction field; returns (echelon rows,
    /// pivot column per used row).
    fn echelon(&self) -> (Vec<Vec<Frac>>, Vec<usize>) {
        let mut m = self.to_fracs();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for r in row + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].div(&m[row][col]);
                for c in col..self.cols {
                    m[r][c] = m[r][c].sub_mul(&factor, &m[row][c]);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank over the fraction field of A.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right kernel over the fraction field, with
    /// denominators cleared to polynomial vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Poly>> {
        let (m, pivots) = self.echelon();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v: Vec<Frac> = (0..self.cols).map(|_| Frac::zero(self.n_vars)).collect();
            v[f] = Frac::from_poly(&Poly::one(self.n_vars));
            // back-substitute pivot rows bottom-up:
            // pivot·v[pc] = −Σ_{c>pc} m[ri][c]·v[c]
            for (ri, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = Frac::zero(self.n_vars);
                for c in pc + 1..self.cols {
                    if v[c].is_zero() || m[ri][c].is_zero() {
                        continue;
                    }
                    acc = acc.add(&m[ri][c].mul(&v[c]));
                }
                v[pc] = acc.neg().div(&m[ri][pc]);
            }
            // clear denominators
            let mut common = Poly::one(self.n_vars);
            for fr in &v {
                if !fr.is_zero() {
                    common = &common * &fr.den;
                }
            }
            let cleared: Vec<Poly> = v
                .iter()
                .map(|fr| {
                    if fr.is_zero() {
                        Poly::zero(self.n_vars)
                    } else {
                        &fr.num * &common.exact_div(&fr.den)
                    }
                })
                .collect();
            basis.push(normalize_poly_vector(cleared));
        }
        basis
    }

    /// Determinant (square matrices) via fraction-field elimination;
    /// the result is exactly polynomial.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut m = self.to_fracs();
        let nv = self.n_vars;
        let mut sign = 1i64;
        let mut det = Frac::from_poly(&Poly::one(nv));
        for col in 0..self.cols {
            let Some(p) = (col..self.rows).find(|&r| !m[r][col].is_zero()) else {
                return Poly::zero(nv);
            };
            if p != col {
                m.swap(col, p);
                sign = -sign;
            }
            det = det.mul(&m[col][col]);
            for r in col + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].div(&m[col][col]);
                for c in col..self.cols {
                    m[r][c] = m[r][c].sub_mul(&factor, &m[col][c]);
                }
            }
        }
        det.num.exact_div(&det.den).scale_int(sign)
    }

    /// Inverse of a matrix whose determinant is a unit of A (a nonzero
    /// rational constant). Entries of the inverse stay polynomial.
    pub fn inverse_unit_det(&self) -> Result<PolyMatrix, CalcError> {
        assert_eq!(self.rows, self.cols);
        let d = self.det();
        if !d.is_constant() || d.is_zero() {
            return Err(CalcError::NonUnitDeterminant);
        }
        let inv_d = BigRational::one() / d.constant_term();
        let n = self.rows;
        let mut adj = PolyMatrix::new(self.n_vars, n, n);
        for r in 0..n {
            for c in 0..n {
                let minor = self.minor(r, c);
                let cof = minor.det().scale_int(if (r + c) % 2 == 0 { 1 } else { -1 });
                *adj.entry_mut(c, r) = cof.scale(&inv_d);
            }
        }
        Ok(adj)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> PolyMatrix {
        let mut m = PolyMatrix::new(self.n_vars, self.rows - 1, self.cols - 1);
        let mut ri = 0;
        for r in 0..self.rows {
            if r == skip_r {
                continue;
            }
            let mut ci = 0;
            for c in 0..self.cols {
                if c == skip_c {
                    continue;
                }
                *m.entry_mut(ri, ci) = self.entry(r, c).clone();
                ci += 1;
            }
            ri += 1;
        }
        m
    }

    /// Is the determinant a unit of A (nonzero constant)?
    pub fn det_is_unit(&self) -> bool {
        let d = self.det();
        d.is_constant() && !d.is_zero()
    }
}

/// Normalize a polynomial vector: divide by the rational content sign
/// and scale so the graded-lex-leading nonzero coefficient is 1-ish
/// (purely cosmetic; spans are unchanged).
fn normalize_poly_vector(v: Vec<Poly>) -> Vec<Poly> {
    let lead = v
        .iter()
        .find_map(|p| p.terms().next_back().map(|(_, c)| c.clone()));
    match lead {
        Some(c) if !c.is_zero() => {
            let s = BigRational::one() / c;
            v.iter().map(|p| p.scale(&s)).collect()
        }
        _ => v,
    }
}

/// Is `v` in the fraction-field span of `gens`?
pub fn in_span(gens: &[Vec<Poly>], v: &[Poly]) -> bool {
    if v.iter().all(|p| p.is_zero()) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let m = PolyMatrix::from_rows(gens.to_vec());
    let base_rank = m.rank();
    let mut aug_rows = gens.to_vec();
    aug_rows.push(v.to_vec());
    PolyMatrix::from_rows(aug_rows).rank() == base_rank
}

/// Mutual span inclusion.
pub fn same_span(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> bool {
    a.iter().all(|v| in_span(b, v)) && b.iter().all(|v| in_span(a, v))
}

/// Dense ℚ-matrix Gaussian elimination utilities for coefficient
/// systems (H⁰ solves, constant-connection searches, …).
#[derive(Debug, Clone)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }

    /// Kernel basis of the homogeneous system `M x = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let idx = |r: usize, c: usize| r * cols + c;
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| !m[idx(r, col)].is_zero()) else {
                continue;
            };
            for c in 0..cols {
                m.swap(idx(row, c), idx(p, c));
            }
            let inv = BigRational::one() / m[idx(row, col)].clone();
            for c in col..cols {
                let v = m[idx(row, c)].clone() * &inv;
                m[idx(row, c)] = v;
            }
            for r in 0..rows {
                if r == row || m[idx(r, col)].is_zero() {
                    continue;
                }
                let f = m[idx(r, col)].clone();
                for c in col..cols {
                    let v = m[idx(r, c)].clone() - &f * &m[idx(row, c)];
                    m[idx(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in (0..cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[idx(ri, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One particular solution of `M x = b`, if consistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let cols = self.cols;
        let rows = self.rows;
        let width = cols + 1;
        let mut m = vec![BigRational::zero(); rows * width];
        for r in 0..rows {
            for c in 0..cols {
                m[r * width + c] = self.at(r, c).clone();
            }
            m[r * width + cols] = b[r].clone();
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row >= rows {
                break;
            }
            let Some(p) = (row..rows).find(|&r| !m[r * width + col].is_zero()) else {
                continue;
            };
            for c in 0..width {
                m.swap(row * width + c, p * width + c);
            }
            let inv = BigRational::one() / m[row * width + col].clone();
            for c in col..width {
                let v = m[row * width + c].clone() * &inv;
                m[row * width + c] = v;
            }
            for r in 0..rows {
                if r == row || m[r * width + col].is_zero() {
                    continue;
                }
                let f = m[r * width + col].clone();
                for c in col..width {
                    let v = m[r * width + c].clone() - &f * &m[row * width + c];
                    m[r * width + c] = v;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // inconsistency: a zero row with nonzero rhs
        for r in 0..rows {
            let all_zero = (0..cols).all(|c| m[r * width + c].is_zero());
            if all_zero && !m[r * width + cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![BigRational::zero(); cols];
        for (r, c) in pivots {
            x[c] = m[r * width + cols].clone();
        }
        Some(x)
    }
}
