//! Truncated connected DG algebras: presentations, opposite and enveloping
//! algebras, and the cohomology algebra.

mod algebra;
mod cohomology;
mod poly;
mod presentation;

pub(crate) use algebra::format_combination;
pub use algebra::{enveloping, opposite, AlgebraRef, TensorIndex, TruncatedDgAlgebra};
pub use cohomology::{cohomology_algebra, CohomologyAlgebra};
pub use poly::{parse_poly, MixedDegrees, NcPolynomial, PolyParseError, PolyParseErrorKind};
pub use presentation::{validate_and_truncate, AlgebraPresentation, GeneratorSpec};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum AlgebraError {
    #[error("relation {index} is not homogeneous")]
    InhomogeneousRelation { index: usize },
    #[error("differential of `{generator}` must have degree {expected}{}", found.map(|d| format!(", found {d}")).unwrap_or_else(|| ", found mixed degrees".into()))]
    DifferentialDegreeMismatch { generator: String, expected: usize, found: Option<usize> },
    #[error("the differential squared is nonzero on `{generator}`")]
    LeibnizSquareNonzero { generator: String },
    #[error("the differential does not preserve the ideal generated by relation {index}")]
    DifferentialNotIdealCompatible { index: usize },
    #[error("algebra is not connected (generator `{generator}` has degree 0)")]
    NotConnected { generator: String },
    #[error("truncation degree {requested} is below the minimum {minimum}")]
    TruncationTooSmall { requested: usize, minimum: usize },
    #[error("algebra tables are inconsistent: {0}")]
    InvariantViolation(String),
}
