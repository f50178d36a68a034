//! DG free class, cone length bounds, grade and depth over `H(A)`,
//! compactness evidence, and smoothness / global dimension classification.

mod cone;
mod ext;
mod reports;

pub use cone::{
    bimodule_cone_length_report, cohomology_resolution, cone_length_report, dg_free_class_greedy, ConeLengthAnalysis, ConeLengthReport, GreedyLayering, RuleTag,
    UpperBound,
};
pub use ext::{depth, ext_into_ring, grade, grade_from_resolution, proj_dim, Bound};
pub use reports::{
    compactness_evidence, compactness_of, global_dimension_report, smoothness_report, ClauseEvidence, Classifier,
    Compactness, GlobalDim, GlobalDimEvidence, GlobalDimReport, GlobalDimRule, Side, SmoothnessReport,
    SmoothnessVerdict,
};

use crate::resolve::ResolveOptions;

/// Knobs shared by the reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantOptions {
    /// Homological length `L` of graded resolutions over `H(A)`; lowered
    /// automatically when the internal-degree window cannot support it.
    pub stages: usize,
    /// Internal-degree cap for graded resolutions. `None` uses everything
    /// the truncation certifies.
    pub window: Option<i32>,
    pub resolve: ResolveOptions,
    /// Width of the trailing window in which a compact resolution must add
    /// no generators. `None` means `max(3, D / 4)`.
    pub trailing: Option<i32>,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { stages: 6, window: None, resolve: ResolveOptions::default(), trailing: None }
    }
}
