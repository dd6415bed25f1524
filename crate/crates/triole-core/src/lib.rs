//! Exact symbolic calculus for triole algebras `A ⊕ (P, g) ⊕ Q` over
//! polynomial coordinate rings `A = ℚ[x₁..xₙ]` with free modules `P`, `Q`.
//!
//! Everything is exact rational arithmetic: no floating point, no
//! tolerances. Differential operators are kept in normal-ordered form
//! (coefficients to the left of the `∂^σ`), which makes order, principal
//! symbols and the `δₐ` commutator calculus decidable by inspection.

// index loops deliberately mirror the tensor-index formulas
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod algebroid;
pub mod biderivation;
pub mod connection;
pub mod derivation;
pub mod diffop;
pub mod form;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod symbol;
pub mod tridiff;
pub mod trimodule;

pub use algebra::{Convention, Submodule, TrioleAlgebra, TrioleElement, TrioleMorphism};
pub use connection::TriConnection;
pub use derivation::GradedDerivation;
pub use diffop::{MatDiffOp, PolyDiffOp};
pub use poly::{Monomial, Poly, ScalarDerivation};
pub use report::{ValidationReport, Witness};
pub use symbol::SymbolTensor;

use thiserror::Error;

/// Errors surfaced by the fallible public operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalcError {
    #[error("ring mismatch: expected {expected} variables, got {got}")]
    RingMismatch { expected: usize, got: usize },
    #[error("axis {axis} out of range for {n_vars} variables")]
    AxisOutOfRange { axis: usize, n_vars: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("order {order} of operator exceeds requested degree {requested}")]
    OrderExceeded { order: usize, requested: usize },
    #[error("ξ-degree mismatch: {0}")]
    SymbolDegreeMismatch(String),
    #[error("matrix determinant is not a unit of A")]
    NonUnitDeterminant,
    #[error("metric is degenerate; identification unavailable")]
    DegenerateMetric,
    #[error("inadmissible degree pair ({0}, {1})")]
    InadmissibleDegrees(i64, i64),
    #[error("bi-derivation degree {0} is admissible by degree counting but has no characterized component structure")]
    NotCharacterized(i64),
    #[error("rank cap exceeded: {0}")]
    RankCapExceeded(String),
    #[error("valence cap exceeded: p+q = {0} > 3")]
    ValenceCapExceeded(usize),
    #[error("malformed substitution: {0}")]
    MalformedSubstitution(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
