//! Turning a job into an algebra and a module over a concrete field.

use std::collections::HashSet;
use std::sync::Arc;

use dgha_core::dgmod::{ExplicitDgModule, FreeElement, SemiFreeDgModule};
use dgha_core::gralg::{
    enveloping, parse_poly, validate_and_truncate, AlgebraPresentation, AlgebraRef, NcPolynomial, PolyParseError,
    PolyParseErrorKind,
};
use dgha_core::{Field, Scalar};

use crate::error::{JobError, RunError};
use crate::job::{Command, JobSpec, ModuleSelector, Positions, SourcePos};

/// Prime fields with a compiled instance.
pub const SUPPORTED_PRIMES: [u32; 9] = [2, 3, 5, 7, 11, 13, 32003, 65521, 2147483647];

/// Calls `$f::<S>(args)` with `S` the scalar type of `$field`.
macro_rules! dispatch {
    ($field:expr, $f:ident ( $($arg:expr),* )) => {{
        use dgha_core::{Fp, Rational};
        match $field {
            dgha_core::Field::Rationals => $f::<Rational>($($arg),*),
            dgha_core::Field::PrimeField(2) => $f::<Fp<2>>($($arg),*),
            dgha_core::Field::PrimeField(3) => $f::<Fp<3>>($($arg),*),
            dgha_core::Field::PrimeField(5) => $f::<Fp<5>>($($arg),*),
            dgha_core::Field::PrimeField(7) => $f::<Fp<7>>($($arg),*),
            dgha_core::Field::PrimeField(11) => $f::<Fp<11>>($($arg),*),
            dgha_core::Field::PrimeField(13) => $f::<Fp<13>>($($arg),*),
            dgha_core::Field::PrimeField(32003) => $f::<Fp<32003>>($($arg),*),
            dgha_core::Field::PrimeField(65521) => $f::<Fp<65521>>($($arg),*),
            dgha_core::Field::PrimeField(2147483647) => $f::<Fp<2147483647>>($($arg),*),
            dgha_core::Field::PrimeField(p) => Err($crate::construct::unsupported_prime(p).into()),
        }
    }};
}
pub(crate) use dispatch;

pub(crate) fn unsupported_prime(p: u32) -> JobError {
    match Field::PrimeField(p).validate() {
        Err(e) => JobError::Semantic(e),
        Ok(()) => JobError::Semantic(format!(
            "GF({p}) is not compiled in; supported primes: {}",
            SUPPORTED_PRIMES.map(|p| p.to_string()).join(", ")
        )),
    }
}

fn poly_error(e: PolyParseError, at: SourcePos, what: &str) -> JobError {
    match e.kind {
        PolyParseErrorKind::Syntax(msg) => JobError::syntax(at.line, at.col + e.col - 1, msg),
        PolyParseErrorKind::UnknownGenerator(g) => JobError::Semantic(format!("{what}: unknown generator `{g}`")),
        PolyParseErrorKind::BadScalar(msg) => JobError::Semantic(format!("{what}: {msg}")),
    }
}

/// Checks everything that does not need the field.
fn validate_shape(job: &JobSpec) -> Result<(), JobError> {
    if job.truncation < 2 {
        return Err(JobError::TruncationTooSmall { requested: job.truncation, minimum: 2 });
    }
    if job.stages < 1 {
        return Err(JobError::Semantic("L must be at least 1".into()));
    }
    let mut names = HashSet::new();
    for (name, degree) in &job.generators {
        if !names.insert(name.as_str()) {
            return Err(JobError::Semantic(format!("generator `{name}` declared twice")));
        }
        if *degree == 0 {
            return Err(JobError::Semantic(format!("generator `{name}` has degree 0; the algebra must be connected")));
        }
    }
    let mut seen = HashSet::new();
    for (name, _) in &job.differential {
        if !names.contains(name.as_str()) {
            return Err(JobError::Semantic(format!("differential of unknown generator `{name}`")));
        }
        if !seen.insert(name.as_str()) {
            return Err(JobError::Semantic(format!("differential of `{name}` given twice")));
        }
    }
    if matches!(job.command, Command::Smoothness | Command::Gldim) && job.module != ModuleSelector::TrivialK {
        return Err(JobError::Semantic(format!("`cmd {}` works with `module trivial_k` only", job.command)));
    }
    if let ModuleSelector::Semifree(gens) = &job.module {
        if gens.is_empty() {
            return Err(JobError::Semantic("a semifree module needs at least one generator".into()));
        }
        let mut own = HashSet::new();
        for g in gens {
            if names.contains(g.name.as_str()) {
                return Err(JobError::Semantic(format!("module generator `{}` clashes with an algebra generator", g.name)));
            }
            if !own.insert(g.name.as_str()) {
                return Err(JobError::Semantic(format!("module generator `{}` declared twice", g.name)));
            }
        }
    }
    Ok(())
}

pub(crate) fn validate(job: &JobSpec, pos: &Positions) -> Result<(), JobError> {
    validate_shape(job)?;
    fn typed<S: Scalar>(job: &JobSpec, pos: &Positions) -> Result<(), JobError> {
        presentation::<S>(job, pos)?;
        semifree_terms::<S>(job, pos)?;
        Ok(())
    }
    dispatch!(job.field, typed(job, pos))
}

pub(crate) fn presentation<S: Scalar>(job: &JobSpec, pos: &Positions) -> Result<AlgebraPresentation<S>, JobError> {
    let gens: Vec<(&str, usize)> = job.generators.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    let mut p = AlgebraPresentation::<S>::new(&gens).with_noetherian_assertion(job.assert_noetherian);
    for (i, r) in job.relations.iter().enumerate() {
        let at = pos.relations.get(i).copied().unwrap_or_default();
        p.relations.push(p.parse(r).map_err(|e| poly_error(e, at, &format!("relation \"{r}\"")))?);
    }
    for (i, (name, img)) in job.differential.iter().enumerate() {
        let at = pos.differential.get(i).copied().unwrap_or_default();
        let g = p.generator_index(name).expect("checked");
        p.differential[g] = p.parse(img).map_err(|e| poly_error(e, at, &format!("differential of `{name}`")))?;
    }
    p.check_degrees().map_err(|e| JobError::Semantic(e.to_string()))?;
    Ok(p)
}

/// `(module generator, scalar, algebra word)` terms of each inline
/// differential, checked for shape, degree and triangularity.
type Terms<S> = Vec<Vec<(usize, S, Vec<usize>)>>;

fn semifree_terms<S: Scalar>(job: &JobSpec, pos: &Positions) -> Result<Terms<S>, JobError> {
    let ModuleSelector::Semifree(gens) = &job.module else {
        return Ok(Vec::new());
    };
    let n_alg = job.generators.len();
    let mut names: Vec<String> = job.generators.iter().map(|(n, _)| n.clone()).collect();
    names.extend(gens.iter().map(|g| g.name.clone()));
    let mut out = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let at = pos.semifree.get(i).copied().unwrap_or_default();
        let what = format!("differential of module generator `{}`", g.name);
        let poly: NcPolynomial<S> = parse_poly(&g.d, &names).map_err(|e| poly_error(e, at, &what))?;
        let mut terms = Vec::with_capacity(poly.terms.len());
        for (c, word) in poly.terms {
            let (&last, prefix) = word.split_last().ok_or_else(|| JobError::Semantic(format!("{what}: constant term")))?;
            if last < n_alg || prefix.iter().any(|&x| x >= n_alg) {
                return Err(JobError::Semantic(format!(
                    "{what}: each term must be algebra generators followed by one module generator"
                )));
            }
            let j = last - n_alg;
            if j >= i {
                return Err(JobError::Semantic(format!(
                    "{what}: may only involve generators declared before it"
                )));
            }
            let degree: i32 = prefix.iter().map(|&x| job.generators[x].1 as i32).sum::<i32>() + gens[j].degree;
            if degree != g.degree + 1 {
                return Err(JobError::Semantic(format!(
                    "{what}: a term has degree {degree}, expected {}",
                    g.degree + 1
                )));
            }
            terms.push((j, c, prefix.to_vec()));
        }
        out.push(terms);
    }
    Ok(out)
}

pub fn algebra<S: Scalar>(job: &JobSpec) -> Result<AlgebraRef<S>, RunError> {
    let p = presentation::<S>(job, &Positions::default())?;
    Ok(Arc::new(validate_and_truncate(&p, job.truncation)?))
}

/// The module a job refers to. The diagonal bimodule lives over the
/// enveloping algebra.
pub fn module<S: Scalar>(job: &JobSpec, a: &AlgebraRef<S>) -> Result<Arc<ExplicitDgModule<S>>, RunError> {
    let m = match &job.module {
        ModuleSelector::TrivialK => ExplicitDgModule::trivial(a.clone()),
        ModuleSelector::Regular => ExplicitDgModule::regular(a.clone()),
        ModuleSelector::DiagonalBimodule => ExplicitDgModule::diagonal(a.clone(), Arc::new(enveloping(a))),
        ModuleSelector::Semifree(gens) => {
            let terms = semifree_terms::<S>(job, &Positions::default())?;
            let mut f = SemiFreeDgModule::new(a.clone());
            for (g, ts) in gens.iter().zip(terms) {
                // Coefficients above the truncation are invisible and dropped.
                let parts = ts
                    .into_iter()
                    .filter_map(|(j, c, word)| a.evaluate_word(&word).map(|(_, v)| (j, v.scale(&c))))
                    .collect();
                f.push(g.name.clone(), g.degree, FreeElement::from_terms(parts)).map_err(|e| {
                    JobError::Semantic(format!("module generator `{}`: {e}", g.name))
                })?;
            }
            ExplicitDgModule::expand(&f)
        }
    };
    Ok(Arc::new(m))
}
