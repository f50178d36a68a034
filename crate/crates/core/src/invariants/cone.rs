use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dgmod::{cohomology_module, ExplicitDgModule, SemiFreeDgModule};
use crate::gralg::{cohomology_algebra, enveloping, AlgebraRef, CohomologyAlgebra};
use crate::resolve::{
    check_minimal_em_conditions, graded_minimal_free_resolution, minimal_semifree_resolution, EmCondition,
    MinimalFreeResolution, ProjDim, ResolutionResult, ResolveError,
};
use crate::scalar::Scalar;

use super::ext::{grade_from_resolution, Bound};
use super::InvariantOptions;

/// A strictly increasing semi-free filtration read off a semi-basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyLayering {
    pub length: usize,
    pub layers: Vec<usize>,
}

/// Layer 0 for cycles, otherwise one more than the highest layer occurring
/// in the differential.
pub fn dg_free_class_greedy<S: Scalar>(f: &SemiFreeDgModule<S>) -> GreedyLayering {
    let mut layers: Vec<usize> = Vec::with_capacity(f.len());
    for g in f.gens() {
        let layer = g.d.generators().map(|j| layers[j] + 1).max().unwrap_or(0);
        layers.push(layer);
    }
    GreedyLayering { length: layers.iter().copied().max().unwrap_or(0), layers }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UpperBound {
    Finite(usize),
    NoFiniteBoundFound,
}

impl UpperBound {
    pub fn finite(self) -> Option<usize> {
        match self {
            UpperBound::Finite(n) => Some(n),
            UpperBound::NoFiniteBoundFound => None,
        }
    }
}

/// Refinements of the cone-length interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleTag {
    /// `cl = grade` forces `pd = grade`; a longer resolution rules out the
    /// grade as the value.
    GradeEquality,
    /// `cl k = 1` exactly when `H(A)` has global dimension one.
    ClOne,
    /// `cl k = 0` exactly when `H(A) ≅ k`.
    ClZero,
    /// A minimal Eilenberg–Moore resolution exists, so `cl = pd`.
    MinimalEm,
    /// `cl` over the enveloping algebra bounds `cl k` from above.
    EnvelopeBound,
}

impl RuleTag {
    pub fn tag(self) -> &'static str {
        match self {
            RuleTag::GradeEquality => "grade-equality",
            RuleTag::ClOne => "cl-one",
            RuleTag::ClZero => "cl-zero",
            RuleTag::MinimalEm => "minimal-em",
            RuleTag::EnvelopeBound => "envelope-bound",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Certified interval for the cone length of a DG module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeLengthReport {
    pub lower: usize,
    pub upper: UpperBound,
    pub exact: bool,
    /// Grade of `H(M)` over `H(A)`.
    pub grade: Bound,
    /// Layering of the minimal resolution; absent when the resolution was
    /// cut off before it closed up.
    pub greedy: Option<GreedyLayering>,
    pub generators: usize,
    pub saturated: bool,
    pub pd: ProjDim,
    pub betti: Vec<usize>,
    pub em_condition: EmCondition,
    pub rules: Vec<RuleTag>,
    pub certified_upto: i32,
}

impl ConeLengthReport {
    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

/// A report together with the resolutions it was read from.
#[derive(Clone, Debug)]
pub struct ConeLengthAnalysis<S> {
    pub report: ConeLengthReport,
    pub resolution: ResolutionResult<S>,
    pub graded: MinimalFreeResolution<S>,
}

pub fn cone_length_report<S: Scalar>(
    m: Arc<ExplicitDgModule<S>>,
    opts: &InvariantOptions,
) -> Result<ConeLengthAnalysis<S>, ResolveError> {
    let ha = cohomology_algebra(m.algebra());
    analyze(m, &ha, opts, None)
}

/// Cone length of `A` as a module over `A ⊗ A^op`, with `cl_A k >= k_lower`
/// as a lower bound.
pub fn bimodule_cone_length_report<S: Scalar>(
    a: AlgebraRef<S>,
    opts: &InvariantOptions,
    k_lower: usize,
) -> Result<ConeLengthAnalysis<S>, ResolveError> {
    let env = Arc::new(enveloping(&a));
    let ha = cohomology_algebra(&env);
    let m = Arc::new(ExplicitDgModule::diagonal(a, env));
    analyze(m, &ha, opts, Some(k_lower))
}

/// Graded minimal free resolution of `H(M)` over `H(A)` on the largest
/// window the truncation supports.
pub fn cohomology_resolution<S: Scalar>(
    m: &ExplicitDgModule<S>,
    ha: &CohomologyAlgebra<S>,
    opts: &InvariantOptions,
) -> Result<MinimalFreeResolution<S>, ResolveError> {
    let hm = cohomology_module(m, ha);
    let low = hm.low();
    let window = opts.window.unwrap_or(low + (hm.ring_certified() as i32).min(hm.top() - low));
    let stages = opts.stages.min((window - low - 1).max(1) as usize);
    graded_minimal_free_resolution(&hm, stages, window)
}

fn analyze<S: Scalar>(
    m: Arc<ExplicitDgModule<S>>,
    ha: &CohomologyAlgebra<S>,
    opts: &InvariantOptions,
    k_lower: Option<usize>,
) -> Result<ConeLengthAnalysis<S>, ResolveError> {
    let resolution = minimal_semifree_resolution(m.clone(), opts.resolve)?;
    let graded = cohomology_resolution(&m, ha, opts)?;
    let greedy = (!resolution.saturated).then(|| dg_free_class_greedy(&resolution.f));
    let pd = graded.proj_dim();
    let betti = graded.betti_dims();
    let grade = grade_from_resolution(&graded, graded.stages(), graded.module.ring_certified());
    let em_condition = check_minimal_em_conditions(&m, &graded);

    let mut lower = grade.lower();
    let mut upper = greedy.as_ref().map(|g| g.length);
    if let ProjDim::Finite(n) = pd {
        upper = Some(upper.map_or(n, |u| u.min(n)));
    }
    let mut rules = Vec::new();
    let mut apply = |rule: RuleTag, lower: &mut usize, upper: &mut Option<usize>, lo: usize, hi: Option<usize>| {
        let new_lower = (*lower).max(lo);
        let new_upper = match (*upper, hi) {
            (Some(u), Some(h)) => Some(u.min(h)),
            (u, h) => u.or(h),
        };
        if new_lower != *lower || new_upper != *upper {
            rules.push(rule);
            *lower = new_lower;
            *upper = new_upper;
        }
    };

    if let Some(k) = k_lower {
        apply(RuleTag::EnvelopeBound, &mut lower, &mut upper, k, None);
    }
    let longer_than = |n: usize| betti.get(n + 1).is_some_and(|&b| b > 0);
    if upper == Some(lower + 1) && lower == grade.lower() && longer_than(lower) {
        let raised = lower + 1;
        apply(RuleTag::GradeEquality, &mut lower, &mut upper, raised, None);
    }
    if m.is_trivial() {
        match pd {
            ProjDim::Finite(1) => apply(RuleTag::ClOne, &mut lower, &mut upper, 1, Some(1)),
            _ if lower == 1 && longer_than(1) => apply(RuleTag::ClOne, &mut lower, &mut upper, 2, None),
            _ => {}
        }
        let h_is_k = (1..=ha.certified_upto()).all(|n| ha.dim(n) == 0);
        if h_is_k {
            apply(RuleTag::ClZero, &mut lower, &mut upper, 0, Some(0));
        } else {
            apply(RuleTag::ClZero, &mut lower, &mut upper, 1, None);
        }
    }
    if em_condition != EmCondition::NotGuaranteed {
        match pd {
            ProjDim::Finite(n) => apply(RuleTag::MinimalEm, &mut lower, &mut upper, n, Some(n)),
            ProjDim::AtLeast(n) => apply(RuleTag::MinimalEm, &mut lower, &mut upper, n, None),
        }
    }
    if upper.is_some_and(|u| lower > u) {
        return Err(ResolveError::InvariantViolation(format!(
            "cone length bounds crossed: lower {lower} above upper {upper:?}"
        )));
    }

    let report = ConeLengthReport {
        lower,
        upper: upper.map_or(UpperBound::NoFiniteBoundFound, UpperBound::Finite),
        exact: upper == Some(lower),
        grade,
        greedy,
        generators: resolution.f.len(),
        saturated: resolution.saturated,
        pd,
        betti,
        em_condition,
        rules,
        certified_upto: resolution.certified_upto,
    };
    Ok(ConeLengthAnalysis { report, resolution, graded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgmod::FreeElement;
    use crate::exactla::SparseVec;
    use crate::gralg::TruncatedDgAlgebra;
    use crate::Rational;

    #[test]
    fn free_module_has_length_zero() {
        let a = Arc::new(TruncatedDgAlgebra::<Rational>::ground(4));
        let mut f = SemiFreeDgModule::new(a);
        f.push("a", 0, FreeElement::zero()).unwrap();
        f.push("b", 2, FreeElement::zero()).unwrap();
        assert_eq!(dg_free_class_greedy(&f), GreedyLayering { length: 0, layers: vec![0, 0] });
    }

    #[test]
    fn layers_follow_differentials() {
        let a = Arc::new(TruncatedDgAlgebra::<Rational>::ground(4));
        let mut f = SemiFreeDgModule::new(a);
        f.push("a", 1, FreeElement::zero()).unwrap();
        f.push("b", 0, FreeElement::term(0, SparseVec::unit(0))).unwrap();
        f.push("c", 2, FreeElement::zero()).unwrap();
        assert_eq!(dg_free_class_greedy(&f).layers, vec![0, 1, 0]);
        assert_eq!(dg_free_class_greedy(&SemiFreeDgModule::<Rational>::new(f.algebra_ref())).length, 0);
    }
}
