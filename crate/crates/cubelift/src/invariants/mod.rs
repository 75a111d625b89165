//! Exact knot invariants: determinant, Kauffman bracket, identification.

pub mod bracket;
pub mod cyclotomic;
pub mod goeritz;
pub mod identify;
pub mod planar;
pub mod poly;

use num_bigint::BigInt;
use thiserror::Error;

pub use bracket::{kauffman_bracket, normalized_bracket, state_sum, writhe, DEFAULT_CROSSING_LIMIT};
pub use goeritz::determinant;
pub use identify::{build_reference_table, identify, Chirality, Identification, ReferenceEntry, ReferenceTable};
pub use planar::{CodeCrossing, Over, PlanarCode};
pub use poly::LaurentPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, above the limit of {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },
    #[error("invalid planar code: {0}")]
    InvalidCode(String),
    #[error("expected a knot, found {0} components")]
    NotAKnot(usize),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("reference table line {line}: {msg}")]
    TableSyntax { line: usize, msg: String },
}

/// Determinant recovered from a bracket: |⟨D⟩ at A = ζ₈|.
pub fn determinant_from_bracket(bracket: &LaurentPolynomial) -> Option<BigInt> {
    bracket.eval_zeta8().integer_abs()
}
