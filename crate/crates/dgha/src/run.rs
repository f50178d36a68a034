//! Command dispatch and report assembly.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use dgha_core::dgmod::{module_cohomology, ExplicitDgModule, HomotopyVerdict};
use dgha_core::exactla::{rank, Matrix, SparseVec};
use dgha_core::gralg::{cohomology_algebra, AlgebraRef, CohomologyAlgebra};
use dgha_core::invariants::{
    cohomology_resolution, cone_length_report, dg_free_class_greedy, Classifier, ConeLengthReport, GlobalDim,
    GlobalDimReport, InvariantOptions, Side, UpperBound,
};
use dgha_core::resolve::{
    check_minimal_em_conditions, e1_complex, eilenberg_moore, minimal_semifree_resolution, split_minimal,
    MinimalFreeResolution, ProjDim, ResolveOptions,
};
use dgha_core::Scalar;

use crate::construct::{self, dispatch};
use crate::error::RunError;
use crate::job::{Command, JobSpec, ModuleSelector};

#[derive(Clone, Debug, Serialize)]
pub struct Truncation {
    #[serde(rename = "D")]
    pub degree: usize,
    #[serde(rename = "L")]
    pub stages: usize,
    #[serde(rename = "Dint")]
    pub window: Option<i32>,
}

/// The structured result of a run. Every command fills the same keys.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub truncation: Truncation,
    pub module: String,
    /// Highest degree through which the values are certified.
    pub certified_upto: i32,
    pub verdict: String,
    pub values: Value,
    pub evidence: Value,
    pub rules: Vec<String>,
}

/// A report and its human-readable rendering.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    pub fn structured(&self) -> Result<String, serde_json::Error> {
        serde_json::to_string_pretty(&self.report)
    }
}

pub fn run(job: &JobSpec) -> Result<Outcome, RunError> {
    dispatch!(job.field, run_in(job))
}

struct Body {
    certified_upto: i32,
    verdict: String,
    values: Value,
    evidence: Value,
    rules: Vec<String>,
    text: String,
}

fn run_in<S: Scalar>(job: &JobSpec) -> Result<Outcome, RunError> {
    let a = construct::algebra::<S>(job)?;
    let opts = InvariantOptions { stages: job.stages, window: job.window, resolve: ResolveOptions::default(), trailing: None };
    let body = match job.command {
        Command::Cohomology => cohomology(job, &a)?,
        Command::Resolve => resolve(job, &a, &opts)?,
        Command::ConeLength => cone_length(job, &a, &opts)?,
        Command::Smoothness => smoothness(&a, &opts)?,
        Command::Gldim => gldim(&a, &opts)?,
        Command::EmCheck => em_check(job, &a, &opts)?,
    };
    let report = Report {
        command: job.command.to_string(),
        field: job.field.to_string(),
        truncation: Truncation { degree: job.truncation, stages: job.stages, window: job.window },
        module: job.module.keyword().to_string(),
        certified_upto: body.certified_upto,
        verdict: body.verdict,
        values: body.values,
        evidence: body.evidence,
        rules: body.rules,
    };
    let mut text = String::new();
    writeln!(text, "command     {}", report.command).unwrap();
    writeln!(text, "field       {}", report.field).unwrap();
    let window = job.window.map_or("auto".to_string(), |w| w.to_string());
    writeln!(text, "truncation  D={} L={} Dint={window}", job.truncation, job.stages).unwrap();
    writeln!(text, "module      {}", report.module).unwrap();
    writeln!(text, "certified   through degree {}", report.certified_upto).unwrap();
    writeln!(text, "verdict     {}", report.verdict).unwrap();
    if !report.rules.is_empty() {
        writeln!(text, "rules       {}", report.rules.join(", ")).unwrap();
    }
    text.push('\n');
    text.push_str(&body.text);
    Ok(Outcome { report, text })
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Dimension of the indecomposables `H^n / (H^+ H^+)^n`.
fn indecomposables<S: Scalar>(ha: &CohomologyAlgebra<S>, n: usize) -> usize {
    let ring = ha.algebra();
    let mut cols = Vec::new();
    for p in 1..n {
        for i in 0..ring.dim(p) {
            for j in 0..ring.dim(n - p) {
                cols.push(ring.basis_product(p, i, n - p, j).clone());
            }
        }
    }
    ring.dim(n) - rank(&Matrix::from_columns(ring.dim(n), cols))
}

fn cohomology<S: Scalar>(job: &JobSpec, a: &AlgebraRef<S>) -> Result<Body, RunError> {
    let ha = cohomology_algebra(a);
    let top = ha.certified_upto();
    let dims: Vec<usize> = (0..=top).map(|n| ha.dim(n)).collect();
    let basis: Vec<Vec<String>> = (0..=top).map(|n| ha.algebra().names(n).to_vec()).collect();
    let gens: Vec<(usize, usize)> =
        (1..=top).map(|n| (n, indecomposables(&ha, n))).filter(|&(_, c)| c > 0).collect();
    let m = construct::module::<S>(job, a)?;
    let module_dims: Vec<(i32, usize)> = (m.low()..m.top()).map(|n| (n, module_cohomology(&m, n).dim())).collect();

    let mut text = String::new();
    writeln!(text, "dim H^n(A), n = 0..{top}: {}", list(&dims)).unwrap();
    for (n, b) in basis.iter().enumerate().skip(1) {
        if !b.is_empty() {
            writeln!(text, "  H^{n}: {}", b.join(", ")).unwrap();
        }
    }
    let g: Vec<String> = gens.iter().map(|(n, c)| format!("{c} in degree {n}")).collect();
    writeln!(text, "algebra generators of H(A): {}", if g.is_empty() { "none".into() } else { g.join(", ") }).unwrap();
    let md: Vec<String> = module_dims.iter().map(|(_, d)| d.to_string()).collect();
    writeln!(text, "dim H^n(M), n = {}..{}: {}", m.low(), m.top() - 1, md.join(", ")).unwrap();
    Ok(Body {
        certified_upto: top as i32,
        verdict: "computed".into(),
        values: json!({ "dims": dims, "basis": basis, "module_dims": module_dims }),
        evidence: json!({ "indecomposables": gens }),
        rules: Vec::new(),
        text,
    })
}

fn format_element<S: Scalar>(m: &ExplicitDgModule<S>, n: i32, v: &SparseVec<S>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let name = m.name(n, i);
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(r) => (true, r.to_string()),
            None => (false, text),
        };
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if mag != "1" {
            write!(s, "{mag}*").unwrap();
        }
        s.push_str(&name);
    }
    s
}

fn graded_json<S: Scalar>(r: &MinimalFreeResolution<S>) -> Value {
    json!({
        "betti": r.betti(),
        "betti_dims": r.betti_dims(),
        "terminated": r.terminated,
        "proj_dim": r.proj_dim(),
        "tor_dims": r.tor_dims(),
        "window": r.window,
    })
}

fn pd_text(pd: &ProjDim) -> String {
    match pd {
        ProjDim::Finite(n) => n.to_string(),
        ProjDim::AtLeast(n) => format!(">= {n}"),
    }
}

fn resolve<S: Scalar>(job: &JobSpec, a: &AlgebraRef<S>, opts: &InvariantOptions) -> Result<Body, RunError> {
    let m = construct::module::<S>(job, a)?;
    let res = minimal_semifree_resolution(m.clone(), opts.resolve)?;
    let layering = dg_free_class_greedy(&res.f);
    let quasi_iso = res.verify_quasi_iso()?.is_quasi_iso();
    let ha = cohomology_algebra(m.algebra());
    let graded = cohomology_resolution(&m, &ha, opts)?;

    let gens: Vec<Value> = res
        .f
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            json!({
                "name": g.name,
                "degree": g.degree,
                "stage": g.stage,
                "layer": layering.layers[i],
                "d": res.f.format_d(i),
                "eps": format_element(&m, g.degree, &res.eps[i]),
            })
        })
        .collect();
    let mut text = String::new();
    writeln!(text, "minimal semi-free resolution: {} generators{}", res.f.len(), if res.saturated { " (round cap reached)" } else { "" })
        .unwrap();
    for (i, g) in res.f.gens().iter().enumerate() {
        writeln!(
            text,
            "  {:<6} degree {:>3}  layer {}  d = {}  eps = {}",
            g.name,
            g.degree,
            layering.layers[i],
            res.f.format_d(i),
            format_element(&m, g.degree, &res.eps[i])
        )
        .unwrap();
    }
    writeln!(text, "minimal: {}  quasi-isomorphism through degree {}: {}", res.f.is_minimal(), res.certified_upto, quasi_iso)
        .unwrap();
    writeln!(text, "graded resolution of H(M) over H(A), internal degrees <= {}:", graded.window).unwrap();
    for (i, b) in graded.betti().iter().enumerate() {
        writeln!(text, "  stage {i}: {} generators in internal degrees [{}]", b.len(), list(b)).unwrap();
    }
    writeln!(text, "  terminated: {}  pd: {}", graded.terminated, pd_text(&graded.proj_dim())).unwrap();
    Ok(Body {
        certified_upto: res.certified_upto,
        verdict: if res.saturated { "saturated" } else { "terminated" }.into(),
        values: json!({
            "generators": gens,
            "count": res.f.len(),
            "degree_profile": res.degree_profile(),
            "stage_profile": res.stage_profile(),
            "greedy_length": layering.length,
            "minimal": res.f.is_minimal(),
            "saturated": res.saturated,
        }),
        evidence: json!({
            "quasi_isomorphism": quasi_iso,
            "rounds": res.log,
            "graded": graded_json(&graded),
        }),
        rules: Vec::new(),
        text,
    })
}

fn cl_verdict(r: &ConeLengthReport) -> String {
    match (r.exact, r.upper) {
        (true, _) => format!("exact {}", r.lower),
        (false, UpperBound::Finite(u)) => format!("between {} and {u}", r.lower),
        (false, UpperBound::NoFiniteBoundFound) => format!("at least {}", r.lower),
    }
}

fn cl_text(label: &str, r: &ConeLengthReport) -> String {
    let mut text = String::new();
    writeln!(text, "{label}: {}", cl_verdict(r)).unwrap();
    let upper = r.upper.finite().map_or("none found".to_string(), |u| u.to_string());
    writeln!(text, "  lower {}  upper {upper}  grade {:?}", r.lower, r.grade).unwrap();
    match &r.greedy {
        Some(g) => writeln!(text, "  greedy layers [{}], length {}", list(&g.layers), g.length).unwrap(),
        None => writeln!(text, "  greedy layering unavailable: the resolution hit the round cap").unwrap(),
    }
    writeln!(text, "  pd over H(A): {}  betti [{}]  {:?}", pd_text(&r.pd), list(&r.betti), r.em_condition).unwrap();
    let tags: Vec<&str> = r.rules.iter().map(|t| t.tag()).collect();
    writeln!(text, "  rules fired: {}", if tags.is_empty() { "none".into() } else { tags.join(", ") }).unwrap();
    text
}

fn cl_values(r: &ConeLengthReport) -> Value {
    json!({
        "value": r.value(),
        "lower": r.lower,
        "upper": r.upper,
        "exact": r.exact,
    })
}

fn cone_length<S: Scalar>(job: &JobSpec, a: &AlgebraRef<S>, opts: &InvariantOptions) -> Result<Body, RunError> {
    let report = if job.module == ModuleSelector::DiagonalBimodule {
        Classifier::new(a.clone(), *opts).cl_envelope()?.report.clone()
    } else {
        cone_length_report(construct::module::<S>(job, a)?, opts)?.report
    };
    let label = if job.module == ModuleSelector::DiagonalBimodule { "cl of A over A^e" } else { "cl_A M" };
    Ok(Body {
        certified_upto: report.certified_upto,
        verdict: cl_verdict(&report),
        values: cl_values(&report),
        rules: report.rules.iter().map(|t| t.tag().to_string()).collect(),
        text: cl_text(label, &report),
        evidence: serde_json::to_value(&report)?,
    })
}

fn gldim_verdict(g: &GlobalDimReport) -> String {
    match &g.value {
        GlobalDim::Exact(n) => format!("Exact({n})"),
        GlobalDim::Interval { lo, hi } => format!("Interval({lo}, {hi})"),
        GlobalDim::InfiniteEvidence { stages, .. } => format!("InfiniteEvidence(no end within {stages} stages)"),
        GlobalDim::Undetermined => "Undetermined".into(),
    }
}

fn gldim_text(label: &str, g: &GlobalDimReport) -> String {
    let rule = g.rule.map_or("none", |r| r.tag());
    format!("{label}: {}  via {rule}  (preconditions hold: {})\n", gldim_verdict(g), g.rule_holds())
}

fn smoothness<S: Scalar>(a: &AlgebraRef<S>, opts: &InvariantOptions) -> Result<Body, RunError> {
    let mut c = Classifier::new(a.clone(), *opts);
    let s = c.smoothness(true)?;
    let g = c.global_dimension(Side::Left, true)?;
    let mut text = String::new();
    let profile: Vec<String> = s.fk_generator_profile.iter().map(|(d, n)| format!("{n} in degree {d}")).collect();
    writeln!(text, "minimal resolution of k: {}", profile.join(", ")).unwrap();
    if let Some((lo, hi)) = s.stabilization_window {
        writeln!(text, "no new generators in degrees {lo}..{hi}").unwrap();
    }
    writeln!(text, "H(A) asserted noetherian: {}", s.noetherian_asserted).unwrap();
    for cl in &s.clauses {
        let holds = cl.holds.map_or("undetermined".to_string(), |h| h.to_string());
        let value = cl.value.map_or(String::new(), |v| format!(" (value {v})"));
        writeln!(text, "  ({}) {}: {holds}{value}", cl.clause, cl.statement).unwrap();
    }
    text.push_str(&cl_text("cl_A k", &s.cl_k));
    if let Some(env) = &s.cl_envelope {
        text.push_str(&cl_text("cl of A over A^e", env));
    }
    text.push_str(&gldim_text("l.Gl.dim A", &g));
    let mut rules: Vec<String> = s.cl_k.rules.iter().map(|t| t.tag().to_string()).collect();
    if let Some(env) = &s.cl_envelope {
        rules.extend(env.rules.iter().map(|t| t.tag().to_string()));
    }
    rules.extend(g.rule.map(|r| r.tag().to_string()));
    Ok(Body {
        certified_upto: s.cl_k.certified_upto,
        verdict: format!("{:?}", s.verdict),
        values: json!({
            "verdict": s.verdict,
            "cl_k": cl_values(&s.cl_k),
            "cl_envelope": s.cl_envelope.as_ref().map(cl_values),
            "gldim": { "value": g.value, "rule": g.rule.map(|r| r.tag()) },
        }),
        evidence: json!({ "smoothness": s, "gldim": g.evidence }),
        rules,
        text,
    })
}

fn gldim<S: Scalar>(a: &AlgebraRef<S>, opts: &InvariantOptions) -> Result<Body, RunError> {
    let mut c = Classifier::new(a.clone(), *opts);
    let left = c.global_dimension(Side::Left, true)?;
    let right = c.opposite().global_dimension(Side::Right, true)?;
    let certified_upto = left.evidence.cl_k.as_ref().map_or(a.top() as i32 - 1, |r| r.certified_upto);
    let mut text = gldim_text("l.Gl.dim A", &left);
    text.push_str(&gldim_text("r.Gl.dim A", &right));
    Ok(Body {
        certified_upto,
        verdict: gldim_verdict(&left),
        values: json!({
            "left": { "value": left.value, "rule": left.rule.map(|r| r.tag()) },
            "right": { "value": right.value, "rule": right.rule.map(|r| r.tag()) },
        }),
        rules: [left.rule, right.rule].iter().flatten().map(|r| r.tag().to_string()).collect(),
        evidence: json!({ "left": left.evidence, "right": right.evidence }),
        text,
    })
}

fn em_check<S: Scalar>(job: &JobSpec, a: &AlgebraRef<S>, opts: &InvariantOptions) -> Result<Body, RunError> {
    let m: Arc<ExplicitDgModule<S>> = construct::module::<S>(job, a)?;
    let ha = cohomology_algebra(m.algebra());
    // One stage beyond the input, to see what attaching it forces.
    let longer = InvariantOptions { stages: job.stages + 1, ..*opts };
    let r = cohomology_resolution(&m, &ha, &longer)?;
    let stages = (job.stages + 1).min(r.stages());
    let condition = check_minimal_em_conditions(&m, &r);
    let em = eilenberg_moore(m.clone(), &ha, &r, stages)?;
    let e1 = e1_complex(&em.f, &em.eps, &m, &ha, r.window)?;
    let e1_matches =
        e1.betti() == r.betti()[..stages] && e1.d[..] == r.d[..stages - 1] && e1.eps == r.eps;
    let e1_non_exact = e1.non_exact_stages()?;
    let units = em.f.unit_coefficients();
    let extended = if r.stages() > stages { Some(eilenberg_moore(m.clone(), &ha, &r, stages + 1)?) } else { None };
    let extended_units = extended.as_ref().map_or(Vec::new(), |x| x.f.unit_coefficients());
    let split = match &extended {
        Some(x) => Some(split_minimal(&x.f, opts.resolve)?),
        None => None,
    };

    // A minimal EM resolution would make cl equal to pd.
    let cl_opts = InvariantOptions { stages: opts.stages.max(crate::job::DEFAULT_STAGES), ..*opts };
    let cl = cone_length_report(m.clone(), &cl_opts)?.report;
    let cl_below_pd = match (cl.upper.finite(), &cl.pd) {
        (Some(u), ProjDim::AtLeast(n)) => u < *n,
        (Some(u), ProjDim::Finite(n)) => cl.exact && u != *n,
        (None, _) => false,
    };
    let minimal = minimal_semifree_resolution(m.clone(), opts.resolve)?;
    let non_minimal = !units.is_empty() || !extended_units.is_empty() || cl_below_pd;

    let mut text = String::new();
    writeln!(text, "sufficient condition for a minimal EM resolution: {condition:?}").unwrap();
    writeln!(text, "input: stages 0..{} of the resolution over H(A), betti [{}]", stages - 1, list(&r.betti_dims()[..stages]))
        .unwrap();
    writeln!(text, "EM resolution: {} generators, stage profile [{}]", em.f.len(), list(&em.f.stages())).unwrap();
    writeln!(text, "  E1 complex reproduces the input: {e1_matches}").unwrap();
    writeln!(text, "  E1 non-exact at stages [{}] (-1 = augmentation)", list(&e1_non_exact)).unwrap();
    writeln!(text, "  unit coefficients in the differential: {}", units.len()).unwrap();
    match (&extended, &split) {
        (Some(x), Some(sp)) => {
            writeln!(text, "attaching stage {stages}: {} generators, unit coefficients {}", x.f.len(), extended_units.len())
                .unwrap();
            writeln!(text, "  minimal model of that object: {} generators, cone {:?}", sp.minimal.f.len(), sp.verdict).unwrap();
        }
        _ => writeln!(text, "no further stage available on this window").unwrap(),
    }
    let upper = cl.upper.finite().map_or("none found".to_string(), |u| u.to_string());
    writeln!(text, "cl_A M in [{}, {upper}], pd over H(A) {}", cl.lower, pd_text(&cl.pd)).unwrap();
    writeln!(text, "minimal semi-free resolution: {} generators, minimal {}", minimal.f.len(), minimal.f.is_minimal()).unwrap();
    Ok(Body {
        certified_upto: minimal.certified_upto,
        verdict: if non_minimal { "NonMinimal" } else { "NoNonMinimalityFound" }.into(),
        values: json!({
            "condition": condition,
            "em_generators": em.f.len(),
            "minimal_generators": minimal.f.len(),
            "minimal_is_minimal": minimal.f.is_minimal(),
            "unit_coefficients": units.len(),
            "extended_unit_coefficients": extended_units.len(),
            "e1_matches_input": e1_matches,
            "cl_below_pd": cl_below_pd,
        }),
        evidence: json!({
            "stages": stages,
            "betti": r.betti()[..stages],
            "em_stage_of_generator": em.f.stages(),
            "e1_non_exact_stages": e1_non_exact,
            "extended_generators": extended.as_ref().map(|x| x.f.len()),
            "split_generators": split.as_ref().map(|s| s.minimal.f.len()),
            "split_cone_trivial": split.as_ref().map(|s| matches!(s.verdict, HomotopyVerdict::TrivialOnWindow { .. })),
            "cl": { "lower": cl.lower, "upper": cl.upper, "exact": cl.exact, "pd": cl.pd },
        }),
        rules: Vec::new(),
        text,
    })
}
