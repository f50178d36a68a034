//! DG modules over a truncated DG algebra: semi-free modules given by
//! generators, their degreewise expansions, morphisms, Hom complexes and
//! graded modules over the cohomology algebra.

mod complex;
mod explicit;
mod free;
mod graded;
mod morphism;

pub use complex::{hom_complex, is_homotopically_trivial, tensor_k, ComplexOfVectorSpaces, HomotopyVerdict};
pub use explicit::{ExpandIndex, ExplicitDgModule};
pub use free::{format_free, FreeElement, Generator, SemiFreeDgModule};
pub use graded::{cohomology_module, GradedModule};
pub use morphism::{compare_cohomology, is_quasi_iso_upto, module_cohomology, DegreeComparison, DgMorphism, QuasiIsoReport};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ModuleError {
    #[error("differential of generator `{generator}` involves a generator that is not earlier")]
    NotTriangular { generator: String },
    #[error("stage of generator `{generator}` is not above the stages its differential uses")]
    StageInconsistent { generator: String },
    #[error("degree {requested} is outside the certified range (up to {available})")]
    RangeExceeded { requested: i32, available: i32 },
    #[error("module data is inconsistent: {0}")]
    InvariantViolation(String),
}
