use std::sync::Arc;

use serde::Serialize;

use crate::dgmod::{
    cohomology_module, is_homotopically_trivial, module_cohomology, ExpandIndex, ExplicitDgModule, FreeElement,
    HomotopyVerdict, SemiFreeDgModule,
};
use crate::exactla::{solve, Matrix, SparseVec};
use crate::gralg::CohomologyAlgebra;
use crate::scalar::Scalar;

use super::graded::{FreeLayout, MinimalFreeResolution};
use super::semifree::{minimal_semifree_resolution, ResolutionResult, ResolveOptions};
use super::ResolveError;

/// A semi-free resolution built stage by stage from a free resolution of
/// `H(M)` over `H(A)`.
#[derive(Clone, Debug)]
pub struct EmResolution<S> {
    pub f: SemiFreeDgModule<S>,
    pub module: Arc<ExplicitDgModule<S>>,
    /// `eps(e_i)` in `M^{|e_i|}`.
    pub eps: Vec<SparseVec<S>>,
    /// `(stage, index within the stage)` of each generator.
    pub origin: Vec<(usize, usize)>,
}

/// Sign attached to an `H(A)` coefficient of internal degree `q` in the
/// stage-`i` part of the differential of a stage-`i + 1` generator.
///
/// With it, `∂²` on leading terms reduces to `d∘d` in the free resolution:
/// the two coefficient degrees of a composite add up to a fixed difference
/// of internal degrees, so the sign is constant along each sum.
fn stage_sign<S: Scalar>(i: usize, q: usize) -> S {
    S::sign((i * q) as i64)
}

fn eps_of<S: Scalar>(
    f: &SemiFreeDgModule<S>,
    m: &ExplicitDgModule<S>,
    eps: &[SparseVec<S>],
    n: i32,
    x: &FreeElement<S>,
) -> SparseVec<S> {
    let mut out = SparseVec::zero();
    for (g, c) in x.terms() {
        let q = (n - f.degree(*g)) as usize;
        out.add_scaled(&m.act(q, c, f.degree(*g), &eps[*g]), &S::one());
    }
    out
}

/// Builds the Eilenberg–Moore resolution of `m` from `r`, a free resolution
/// of `H(M)` over `H(A)`, using its first `stages` stages.
///
/// A stage-`i` generator of internal degree `t` becomes a generator of
/// degree `t - i`. Its differential is the lift of `d_i` through cocycle
/// representatives, plus a correction in lower filtration found by a linear
/// solve together with its image in `M`.
pub fn eilenberg_moore<S: Scalar>(
    m: Arc<ExplicitDgModule<S>>,
    ha: &CohomologyAlgebra<S>,
    r: &MinimalFreeResolution<S>,
    stages: usize,
) -> Result<EmResolution<S>, ResolveError> {
    if !r.ring().same_tables(ha.algebra()) {
        return Err(ResolveError::NotAResolutionOfHM("resolution is over a different ring".into()));
    }
    let a = m.algebra_ref();
    let stages = stages.min(r.stages());
    let mut f = SemiFreeDgModule::new(a.clone());
    let mut eps: Vec<SparseVec<S>> = Vec::new();
    let mut origin = Vec::new();
    // Generator index of (stage, position).
    let mut index_of: Vec<Vec<usize>> = Vec::new();

    let ring = r.ring();
    for i in 0..stages {
        let layout = &r.layouts[i];
        let mut here = Vec::with_capacity(layout.len());
        for (g, &t) in layout.degrees.iter().enumerate() {
            let deg = t - i as i32;
            let name = format!("s{i}w{g}");
            if i == 0 {
                let hm = module_cohomology(&m, t);
                if hm.dim() != r.module.dim(t) {
                    return Err(ResolveError::NotAResolutionOfHM(format!("H^{t}(M) has the wrong dimension")));
                }
                let rep = hm.lift(&r.eps[g]);
                here.push(f.push_with_stage(name, deg, 0, FreeElement::zero())?);
                eps.push(rep);
                origin.push((0, g));
                continue;
            }
            // Leading term from d_i.
            let prev = &r.layouts[i - 1];
            let mut lead = Vec::new();
            for (h, coeff) in prev.split(ring, t, &r.d[i - 1][g]) {
                let q = (t - prev.degrees[h]) as usize;
                if q > ha.certified_upto() {
                    return Err(ResolveError::TruncationTooSmall { requested: q as i32, minimum: ha.certified_upto() as i32 });
                }
                let rep = ha.lift(q, &coeff).scale(&stage_sign(i - 1, q));
                lead.push((index_of[i - 1][h], rep));
            }
            let lead = FreeElement::from_terms(lead);
            let (correction, m_prime) = correct(&f, &m, &eps, i, deg, &lead)?;
            here.push(f.push_with_stage(name, deg, i, lead.add(&correction))?);
            eps.push(m_prime);
            origin.push((i, g));
        }
        index_of.push(here);
    }
    Ok(EmResolution { f, module: m, eps, origin })
}

/// Solves for `c'` (coefficients on generators of stage `<= i - 2`, plus
/// coboundary coefficients on stage `i - 1`) and `m'` with
/// `∂(c + c') = 0` and `eps(c + c') = ∂m'`.
fn correct<S: Scalar>(
    f: &SemiFreeDgModule<S>,
    m: &ExplicitDgModule<S>,
    eps: &[SparseVec<S>],
    i: usize,
    deg: i32,
    lead: &FreeElement<S>,
) -> Result<(FreeElement<S>, SparseVec<S>), ResolveError> {
    let a = f.algebra();
    let index = ExpandIndex::new(f);
    let check_f = deg + 2 <= f.top();
    let check_m = deg + 1 >= m.low() && deg < m.top();
    let fdim = if check_f { index.dim(deg + 2) } else { 0 };
    let mdim = if check_m { m.dim(deg + 1) } else { 0 };
    let stacked = |x: &FreeElement<S>| -> SparseVec<S> {
        let mut v = if check_f { index.to_flat(deg + 2, &f.apply_d(deg + 1, x)) } else { SparseVec::zero() };
        if check_m {
            v.add_scaled(&eps_of(f, m, eps, deg + 1, x).shifted(fdim), &S::one());
        }
        v
    };
    let mut unknowns: Vec<FreeElement<S>> = Vec::new();
    for (j, g) in f.gens().iter().enumerate() {
        let q = deg + 1 - g.degree;
        if q < 0 || q as usize > a.top() {
            continue;
        }
        let q = q as usize;
        if g.stage + 2 <= i {
            unknowns.extend((0..a.dim(q)).map(|b| FreeElement::term(j, SparseVec::unit(b))));
        } else if g.stage + 1 == i && q >= 1 {
            unknowns.extend(
                (0..a.dim(q - 1))
                    .map(|b| a.d(q - 1, &SparseVec::unit(b)))
                    .filter(|c| !c.is_zero())
                    .map(|c| FreeElement::term(j, c)),
            );
        }
    }
    let m_dim = if deg >= m.low() && deg <= m.top() { m.dim(deg) } else { 0 };
    let m_cols: Vec<SparseVec<S>> = if check_m {
        (0..m_dim).map(|b| m.d(deg, &SparseVec::unit(b)).neg().shifted(fdim)).collect()
    } else {
        Vec::new()
    };
    let rhs = stacked(lead).neg();
    // Prefer corrections with coefficients in the augmentation ideal; fall
    // back to unit coefficients only when nothing else works.
    let solve_with = |unknowns: &[FreeElement<S>]| {
        let mut cols: Vec<SparseVec<S>> = unknowns.iter().map(&stacked).collect();
        cols.extend(m_cols.iter().cloned());
        solve(&Matrix::from_columns(fdim + mdim, cols), &rhs)
    };
    let positive: Vec<FreeElement<S>> =
        unknowns.iter().filter(|x| x.terms().iter().all(|(j, _)| f.degree(*j) <= deg)).cloned().collect();
    let (unknowns, x) = match solve_with(&positive) {
        Some(x) => (positive, x),
        None => {
            let x = solve_with(&unknowns).ok_or_else(|| {
                ResolveError::NotAResolutionOfHM(format!("no correction term in degree {deg} at stage {i}"))
            })?;
            (unknowns, x)
        }
    };
    let mut correction = FreeElement::zero();
    for (k, c) in x.iter() {
        if k < unknowns.len() {
            correction.add_scaled(&unknowns[k], c);
        }
    }
    let m_prime = x.slice(unknowns.len(), unknowns.len() + m_dim);
    let m_prime = SparseVec::from_pairs(m_prime.iter().map(|(k, c)| (k - unknowns.len(), c.clone())).collect());
    Ok((correction, m_prime))
}

/// The `E_1` complex of the stage filtration: stage `i` becomes the free
/// `H(A)`-module on the stage-`i` generators (generator of degree `d`
/// placed in internal degree `d + i`), with the map induced by the
/// stage-lowering part of `∂`, coefficients taken to `H(A)` and the same
/// sign normalization as [`eilenberg_moore`]. The augmentation sends each
/// stage-0 generator to the class of its image in `M`.
pub fn e1_complex<S: Scalar>(
    f: &SemiFreeDgModule<S>,
    eps: &[SparseVec<S>],
    m: &ExplicitDgModule<S>,
    ha: &CohomologyAlgebra<S>,
    window: i32,
) -> Result<MinimalFreeResolution<S>, ResolveError> {
    let ring = ha.algebra();
    let n_stages = f.max_stage().map_or(0, |s| s + 1);
    let mut position = vec![0usize; f.len()];
    let mut degrees: Vec<Vec<i32>> = vec![Vec::new(); n_stages];
    for (k, g) in f.gens().iter().enumerate() {
        position[k] = degrees[g.stage].len();
        degrees[g.stage].push(g.degree + g.stage as i32);
    }
    let layouts: Vec<FreeLayout> = degrees.into_iter().map(|d| FreeLayout::new(ring, d)).collect();
    let mut d: Vec<Vec<SparseVec<S>>> = (1..n_stages).map(|s| Vec::with_capacity(layouts[s].len())).collect();
    let mut eps0 = Vec::new();
    for (k, g) in f.gens().iter().enumerate() {
        let t = g.degree + g.stage as i32;
        if g.stage == 0 {
            let hm = module_cohomology(m, g.degree);
            let class = hm.classify(&eps[k]).ok_or_else(|| {
                ResolveError::InvariantViolation(format!("image of {} is not a cocycle", g.name))
            })?;
            eps0.push(class);
            continue;
        }
        let prev = &layouts[g.stage - 1];
        let mut v = SparseVec::zero();
        for (j, c) in g.d.terms() {
            if f.gens()[*j].stage + 1 != g.stage {
                continue;
            }
            let q = (g.degree + 1 - f.degree(*j)) as usize;
            if q > ha.certified_upto() {
                return Err(ResolveError::TruncationTooSmall { requested: q as i32, minimum: ha.certified_upto() as i32 });
            }
            let class = ha
                .class_of(q, c)
                .ok_or_else(|| ResolveError::InvariantViolation(format!("coefficient in ∂{} is not a cocycle", g.name)))?;
            let off = prev.offset(ring, t, position[*j]).expect("block of a lower-degree generator");
            v.add_scaled(&class.scale(&stage_sign(g.stage - 1, q)).shifted(off), &S::one());
        }
        d[g.stage - 1].push(v);
    }
    let module = cohomology_module(m, ha);
    let low = layouts.iter().flat_map(|l| l.degrees.iter().copied()).min().unwrap_or(0).min(module.low());
    Ok(MinimalFreeResolution { module, low, window, layouts, eps: eps0, d, terminated: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmCondition {
    /// Both differentials vanish: the resolution can be taken as the
    /// totalization of the free resolution and is minimal.
    ZeroDifferentials,
    /// Every stage's generators sit strictly above the previous stage's.
    DegreeGap,
    /// Neither sufficient condition holds.
    NotGuaranteed,
}

/// Sufficient conditions for a minimal Eilenberg–Moore resolution.
pub fn check_minimal_em_conditions<S: Scalar>(m: &ExplicitDgModule<S>, r: &MinimalFreeResolution<S>) -> EmCondition {
    if m.algebra().is_zero_differential() && m.has_zero_differential() {
        return EmCondition::ZeroDifferentials;
    }
    let betti = r.betti();
    let gap = betti.windows(2).all(|w| match (w[0].iter().max(), w[1].iter().min()) {
        (Some(hi), Some(lo)) => lo > hi,
        _ => true,
    });
    if gap {
        EmCondition::DegreeGap
    } else {
        EmCondition::NotGuaranteed
    }
}

/// A minimal model of a finite semi-free module together with the
/// homotopy test on the cone of the comparison map.
#[derive(Clone, Debug)]
pub struct SplitResult<S> {
    pub minimal: ResolutionResult<S>,
    pub verdict: HomotopyVerdict,
}

/// Resolves `expand(F)` minimally and tests that the cone of the comparison
/// `G -> F` is homotopically trivial on the certified window.
pub fn split_minimal<S: Scalar>(f: &SemiFreeDgModule<S>, opts: ResolveOptions) -> Result<SplitResult<S>, ResolveError> {
    let fx = Arc::new(ExplicitDgModule::expand(f));
    let g = minimal_semifree_resolution(fx.clone(), opts)?;
    let (_, index) = fx.semifree().expect("expanded module");
    let images: Vec<FreeElement<S>> =
        g.eps.iter().zip(g.f.gens()).map(|(v, gen)| index.from_flat(gen.degree, v)).collect();
    let cone = f.mapping_cone(&g.f, &images)?;
    let max_e = cone.gens().iter().map(|e| e.degree).max().unwrap_or(0);
    let verdict = is_homotopically_trivial(&cone, (i32::MIN / 2, g.certified_upto - max_e));
    Ok(SplitResult { minimal: g, verdict })
}
