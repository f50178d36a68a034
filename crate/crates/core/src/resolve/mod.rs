//! Resolutions: minimal semi-free resolutions of DG modules, minimal graded
//! free resolutions over the cohomology algebra, and Eilenberg–Moore
//! resolutions built from the latter.

mod em;
mod graded;
mod semifree;

pub use em::{
    check_minimal_em_conditions, e1_complex, eilenberg_moore, split_minimal, EmCondition, EmResolution, SplitResult,
};
pub use graded::{graded_minimal_free_resolution, tor_of_free_complex, FreeLayout, MinimalFreeResolution, ProjDim};
pub use semifree::{
    deletion_check, minimal_semifree_resolution, DegreeLog, DeletionVerdict, ResolutionResult, ResolveOptions,
};

use serde::Serialize;
use thiserror::Error;

use crate::dgmod::ModuleError;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ResolveError {
    #[error("truncation too small: need {minimum}, have {requested}")]
    TruncationTooSmall { requested: i32, minimum: i32 },
    #[error("internal-degree window {window} is too small (need {needed})")]
    WindowTooSmall { needed: i32, window: i32 },
    #[error("input is not a resolution of H(M): {0}")]
    NotAResolutionOfHM(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("resolution invariant violated: {0}")]
    InvariantViolation(String),
}
