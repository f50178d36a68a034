use std::sync::Arc;

use serde::Serialize;

use crate::dgmod::ExplicitDgModule;
use crate::gralg::{cohomology_algebra, opposite, AlgebraRef, CohomologyAlgebra};
use crate::resolve::{minimal_semifree_resolution, ProjDim, ResolutionResult, ResolveError};
use crate::scalar::Scalar;

use super::cone::{bimodule_cone_length_report, cone_length_report, ConeLengthAnalysis, ConeLengthReport, UpperBound};
use super::ext::Bound;
use super::InvariantOptions;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Compactness {
    /// No generators in the trailing window; `dim_k H(k ⊗ F)` equals the
    /// generator count.
    CompactEvidence { total_generators: usize, stabilization: (i32, i32) },
    GrowthEvidence { degree_profile: Vec<(i32, usize)>, stage_profile: Vec<usize>, saturated: bool },
    /// The certified range is too short to hold a trailing window.
    Undetermined { certified_upto: i32, trailing: i32 },
}

fn trailing_width(top: usize, opts: &InvariantOptions) -> i32 {
    opts.trailing.unwrap_or((top as i32 / 4).max(3))
}

/// Reads compactness evidence off a minimal resolution.
pub fn compactness_of<S: Scalar>(res: &ResolutionResult<S>, trailing: i32) -> Compactness {
    let growth = || Compactness::GrowthEvidence {
        degree_profile: res.degree_profile(),
        stage_profile: res.stage_profile(),
        saturated: res.saturated,
    };
    if res.saturated {
        return growth();
    }
    let hi = res.certified_upto;
    let lo = hi - trailing + 1;
    if lo <= res.bottom {
        return Compactness::Undetermined { certified_upto: hi, trailing };
    }
    if res.f.gens().iter().any(|g| (lo..=hi).contains(&g.degree)) {
        growth()
    } else {
        Compactness::CompactEvidence { total_generators: res.f.len(), stabilization: (lo, hi) }
    }
}

pub fn compactness_evidence<S: Scalar>(
    m: Arc<ExplicitDgModule<S>>,
    opts: &InvariantOptions,
) -> Result<Compactness, ResolveError> {
    let trailing = trailing_width(m.algebra().top(), opts);
    let res = minimal_semifree_resolution(m, opts.resolve)?;
    Ok(compactness_of(&res, trailing))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmoothnessVerdict {
    SmoothEvidence,
    NonCompactEvidence,
    Undetermined,
}

/// One of the equivalent conditions for smoothness, with what the
/// computation found. `holds` is `None` when the window settles nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseEvidence {
    pub clause: char,
    pub statement: &'static str,
    pub holds: Option<bool>,
    pub value: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub verdict: SmoothnessVerdict,
    pub fk_generator_profile: Vec<(i32, usize)>,
    pub stabilization_window: Option<(i32, i32)>,
    pub compactness: Compactness,
    pub noetherian_asserted: bool,
    pub clauses: Vec<ClauseEvidence>,
    pub cl_k: ConeLengthReport,
    pub cl_envelope: Option<ConeLengthReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GlobalDim {
    Exact(usize),
    Interval { lo: usize, hi: usize },
    /// The resolution of `k` did not close up within `stages` stages.
    InfiniteEvidence { stages: usize, betti: Vec<usize> },
    Undetermined,
}

/// The classification step that produced a global-dimension value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GlobalDimRule {
    /// Zero exactly when `H(A) ≅ k`.
    TrivialCohomology,
    /// For zero differential, the global dimension of the underlying graded
    /// algebra, which is `pd k`.
    ZeroDifferential,
    /// `pd_{H(A)} k = 1`.
    PdOne,
    /// `pd_{H(A)} k = 2`.
    PdTwo,
    /// Finite `pd_{H(A)} k` equal to `depth H(A)`.
    PdEqualsDepth,
    /// `cl` of `A` over the enveloping algebra equals `cl_A k`.
    EnvelopeEqualsK,
    /// Bracketed by `cl_A k` and `cl` of `A` over the enveloping algebra.
    EnvelopeInterval,
}

impl GlobalDimRule {
    pub fn tag(self) -> &'static str {
        match self {
            GlobalDimRule::TrivialCohomology => "trivial-cohomology",
            GlobalDimRule::ZeroDifferential => "zero-differential",
            GlobalDimRule::PdOne => "pd-one",
            GlobalDimRule::PdTwo => "pd-two",
            GlobalDimRule::PdEqualsDepth => "pd-equals-depth",
            GlobalDimRule::EnvelopeEqualsK => "envelope-equals-k",
            GlobalDimRule::EnvelopeInterval => "envelope-interval",
        }
    }
}

/// Everything the classification looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalDimEvidence {
    pub h_is_k: bool,
    pub zero_differential: bool,
    pub pd_k: Option<ProjDim>,
    pub betti_k: Vec<usize>,
    pub depth: Option<Bound>,
    pub cl_k: Option<ConeLengthReport>,
    pub cl_envelope: Option<ConeLengthReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalDimReport {
    pub side: Side,
    pub value: GlobalDim,
    pub rule: Option<GlobalDimRule>,
    pub evidence: GlobalDimEvidence,
}

impl GlobalDimReport {
    /// Re-evaluates the cited rule's preconditions from the stored evidence.
    pub fn rule_holds(&self) -> bool {
        let ev = &self.evidence;
        let exact_cl = |r: &Option<ConeLengthReport>| r.as_ref().and_then(ConeLengthReport::value);
        match (self.rule, &self.value) {
            (None, GlobalDim::Undetermined) => true,
            (Some(GlobalDimRule::TrivialCohomology), GlobalDim::Exact(0)) => ev.h_is_k,
            (Some(GlobalDimRule::ZeroDifferential), GlobalDim::Exact(n)) => {
                ev.zero_differential && ev.pd_k == Some(ProjDim::Finite(*n))
            }
            (Some(GlobalDimRule::ZeroDifferential), GlobalDim::InfiniteEvidence { stages, .. }) => {
                ev.zero_differential && ev.pd_k == Some(ProjDim::AtLeast(*stages))
            }
            (Some(GlobalDimRule::PdOne), GlobalDim::Exact(1)) => ev.pd_k == Some(ProjDim::Finite(1)),
            (Some(GlobalDimRule::PdTwo), GlobalDim::Exact(2)) => ev.pd_k == Some(ProjDim::Finite(2)),
            (Some(GlobalDimRule::PdEqualsDepth), GlobalDim::Exact(n)) => {
                ev.pd_k == Some(ProjDim::Finite(*n)) && ev.depth == Some(Bound::Value(*n))
            }
            (Some(GlobalDimRule::EnvelopeEqualsK), GlobalDim::Exact(n)) => {
                exact_cl(&ev.cl_k) == Some(*n) && exact_cl(&ev.cl_envelope) == Some(*n)
            }
            (Some(GlobalDimRule::EnvelopeInterval), GlobalDim::Interval { lo, hi }) => {
                ev.cl_k.as_ref().is_some_and(|r| r.lower == *lo)
                    && ev.cl_envelope.as_ref().is_some_and(|r| r.upper == UpperBound::Finite(*hi))
            }
            _ => false,
        }
    }
}

/// Lazily computed invariants of one algebra, shared between reports.
pub struct Classifier<S> {
    algebra: AlgebraRef<S>,
    opts: InvariantOptions,
    ha: Option<CohomologyAlgebra<S>>,
    k: Option<ConeLengthAnalysis<S>>,
    envelope: Option<ConeLengthAnalysis<S>>,
}

impl<S: Scalar> Classifier<S> {
    pub fn new(algebra: AlgebraRef<S>, opts: InvariantOptions) -> Self {
        Classifier { algebra, opts, ha: None, k: None, envelope: None }
    }

    /// The same computations over the opposite algebra.
    pub fn opposite(&self) -> Self {
        Classifier::new(Arc::new(opposite(&self.algebra)), self.opts)
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.algebra
    }

    pub fn cohomology(&mut self) -> &CohomologyAlgebra<S> {
        let a = &self.algebra;
        self.ha.get_or_insert_with(|| cohomology_algebra(a))
    }

    pub fn cl_k(&mut self) -> Result<&ConeLengthAnalysis<S>, ResolveError> {
        if self.k.is_none() {
            let k = Arc::new(ExplicitDgModule::trivial(self.algebra.clone()));
            self.k = Some(cone_length_report(k, &self.opts)?);
        }
        Ok(self.k.as_ref().expect("just computed"))
    }

    pub fn cl_envelope(&mut self) -> Result<&ConeLengthAnalysis<S>, ResolveError> {
        if self.envelope.is_none() {
            let k_lower = self.cl_k()?.report.lower;
            self.envelope = Some(bimodule_cone_length_report(self.algebra.clone(), &self.opts, k_lower)?);
        }
        Ok(self.envelope.as_ref().expect("just computed"))
    }

    pub fn smoothness(&mut self, with_envelope: bool) -> Result<SmoothnessReport, ResolveError> {
        let trailing = trailing_width(self.algebra.top(), &self.opts);
        let k = self.cl_k()?;
        let compactness = compactness_of(&k.resolution, trailing);
        let fk_generator_profile = k.resolution.degree_profile();
        let cl_k = k.report.clone();
        let (verdict, stabilization_window) = match &compactness {
            Compactness::CompactEvidence { stabilization, .. } => (SmoothnessVerdict::SmoothEvidence, Some(*stabilization)),
            Compactness::GrowthEvidence { .. } => (SmoothnessVerdict::NonCompactEvidence, None),
            Compactness::Undetermined { .. } => (SmoothnessVerdict::Undetermined, None),
        };
        let compact_k = match verdict {
            SmoothnessVerdict::SmoothEvidence => Some(true),
            SmoothnessVerdict::NonCompactEvidence => Some(false),
            SmoothnessVerdict::Undetermined => None,
        };
        let mut clauses = vec![
            ClauseEvidence {
                clause: 'a',
                statement: "A is homologically smooth (k is compact)",
                holds: compact_k,
                value: match &compactness {
                    Compactness::CompactEvidence { total_generators, .. } => Some(*total_generators),
                    _ => None,
                },
            },
            cl_clause('b', "cl_A k is finite", &cl_k, compact_k),
        ];
        let cl_envelope = if with_envelope {
            let env = self.cl_envelope()?;
            let compact = match compactness_of(&env.resolution, trailing) {
                Compactness::CompactEvidence { .. } => Some(true),
                Compactness::GrowthEvidence { .. } => Some(false),
                Compactness::Undetermined { .. } => None,
            };
            clauses.push(cl_clause('c', "cl_{A^e} A is finite", &env.report, compact));
            Some(env.report.clone())
        } else {
            None
        };
        Ok(SmoothnessReport {
            verdict,
            fk_generator_profile,
            stabilization_window,
            compactness,
            noetherian_asserted: self.algebra.noetherian_asserted(),
            clauses,
            cl_k,
            cl_envelope,
        })
    }

    /// Classification of the left global dimension; the first applicable
    /// rule wins. Rules that need the enveloping algebra are skipped unless
    /// `with_envelope` is set.
    pub fn global_dimension(&mut self, side: Side, with_envelope: bool) -> Result<GlobalDimReport, ResolveError> {
        let ha = self.cohomology();
        let h_is_k = (1..=ha.certified_upto()).all(|n| ha.dim(n) == 0);
        let mut evidence = GlobalDimEvidence {
            h_is_k,
            zero_differential: self.algebra.is_zero_differential(),
            pd_k: None,
            betti_k: Vec::new(),
            depth: None,
            cl_k: None,
            cl_envelope: None,
        };
        let report = |value, rule, evidence| Ok(GlobalDimReport { side, value, rule, evidence });
        if h_is_k {
            return report(GlobalDim::Exact(0), Some(GlobalDimRule::TrivialCohomology), evidence);
        }
        let k = self.cl_k()?;
        let pd = k.report.pd.clone();
        evidence.pd_k = Some(pd.clone());
        evidence.betti_k = k.report.betti.clone();
        evidence.depth = Some(k.report.grade);
        evidence.cl_k = Some(k.report.clone());
        if evidence.zero_differential {
            let value = match pd {
                ProjDim::Finite(n) => GlobalDim::Exact(n),
                ProjDim::AtLeast(stages) => GlobalDim::InfiniteEvidence { stages, betti: evidence.betti_k.clone() },
            };
            return report(value, Some(GlobalDimRule::ZeroDifferential), evidence);
        }
        match pd {
            ProjDim::Finite(1) => return report(GlobalDim::Exact(1), Some(GlobalDimRule::PdOne), evidence),
            ProjDim::Finite(2) => return report(GlobalDim::Exact(2), Some(GlobalDimRule::PdTwo), evidence),
            ProjDim::Finite(n) if evidence.depth == Some(Bound::Value(n)) => {
                return report(GlobalDim::Exact(n), Some(GlobalDimRule::PdEqualsDepth), evidence);
            }
            _ => {}
        }
        if !with_envelope {
            return report(GlobalDim::Undetermined, None, evidence);
        }
        let k_report = evidence.cl_k.clone().expect("set above");
        let env = self.cl_envelope()?.report.clone();
        evidence.cl_envelope = Some(env.clone());
        if let (Some(n), Some(m)) = (k_report.value(), env.value()) {
            if n == m {
                return report(GlobalDim::Exact(n), Some(GlobalDimRule::EnvelopeEqualsK), evidence);
            }
        }
        if let UpperBound::Finite(hi) = env.upper {
            let value = GlobalDim::Interval { lo: k_report.lower, hi };
            return report(value, Some(GlobalDimRule::EnvelopeInterval), evidence);
        }
        report(GlobalDim::Undetermined, None, evidence)
    }
}

fn cl_clause(clause: char, statement: &'static str, r: &ConeLengthReport, compact: Option<bool>) -> ClauseEvidence {
    let holds = match r.upper {
        UpperBound::Finite(_) => Some(true),
        UpperBound::NoFiniteBoundFound => compact,
    };
    ClauseEvidence { clause, statement, holds, value: r.value() }
}

/// Smoothness evidence for `A`: compactness of `k`, plus the cone length of
/// `A` over `A ⊗ A^op` when `with_envelope` is set.
pub fn smoothness_report<S: Scalar>(
    a: AlgebraRef<S>,
    opts: &InvariantOptions,
    with_envelope: bool,
) -> Result<SmoothnessReport, ResolveError> {
    Classifier::new(a, *opts).smoothness(with_envelope)
}

/// Left global dimension, or the right one computed over the opposite
/// algebra.
pub fn global_dimension_report<S: Scalar>(
    a: AlgebraRef<S>,
    side: Side,
    opts: &InvariantOptions,
    with_envelope: bool,
) -> Result<GlobalDimReport, ResolveError> {
    let mut c = Classifier::new(a, *opts);
    if side == Side::Right {
        c = c.opposite();
    }
    c.global_dimension(side, with_envelope)
}
