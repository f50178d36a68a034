use std::sync::Arc;

use serde::Serialize;

use crate::dgmod::{
    is_quasi_iso_upto, module_cohomology, DgMorphism, ExplicitDgModule, FreeElement, QuasiIsoReport, SemiFreeDgModule,
};
use crate::exactla::{image_basis, kernel_basis, solve, Matrix, Quotient, SparseVec};
use crate::scalar::Scalar;

use super::ResolveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct ResolveOptions {
    /// Cap on kernel-killing rounds within one degree. `None` means the
    /// algebra's truncation degree minus one.
    pub max_rounds: Option<usize>,
}


/// Generators added while processing one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLog {
    pub degree: i32,
    pub surjectivity: usize,
    /// Kernel-killing generators added per round.
    pub kernel_rounds: Vec<usize>,
}

impl DegreeLog {
    pub fn kernel_killing(&self) -> usize {
        self.kernel_rounds.iter().sum()
    }
}

/// A minimal semi-free resolution `eps: F -> M`, certified up to a degree.
#[derive(Clone, Debug)]
pub struct ResolutionResult<S> {
    pub f: SemiFreeDgModule<S>,
    pub module: Arc<ExplicitDgModule<S>>,
    /// `eps(e_i)` in `M^{|e_i|}`.
    pub eps: Vec<SparseVec<S>>,
    /// Least degree where `H(M)` is nonzero (or the bottom of `M`).
    pub bottom: i32,
    /// `H^n(eps)` is bijective for `n <= certified_upto`.
    pub certified_upto: i32,
    /// Set when the round cap stopped the construction with classes still
    /// left to kill.
    pub saturated: bool,
    pub log: Vec<DegreeLog>,
}

impl<S: Scalar> ResolutionResult<S> {
    pub fn expanded(&self) -> Arc<ExplicitDgModule<S>> {
        Arc::new(ExplicitDgModule::expand(&self.f))
    }

    pub fn eps_morphism(&self) -> DgMorphism<S> {
        DgMorphism::from_generators(self.expanded(), self.module.clone(), self.eps.clone())
    }

    pub fn verify_quasi_iso(&self) -> Result<QuasiIsoReport, ResolveError> {
        Ok(is_quasi_iso_upto(&self.eps_morphism(), self.certified_upto)?)
    }

    /// Generator counts per degree.
    pub fn degree_profile(&self) -> Vec<(i32, usize)> {
        let mut out: Vec<(i32, usize)> = Vec::new();
        for g in self.f.gens() {
            match out.iter_mut().find(|(d, _)| *d == g.degree) {
                Some((_, c)) => *c += 1,
                None => out.push((g.degree, 1)),
            }
        }
        out.sort_unstable();
        out
    }

    /// Generator counts per stage.
    pub fn stage_profile(&self) -> Vec<usize> {
        let mut out = vec![0; self.f.max_stage().map_or(0, |s| s + 1)];
        for g in self.f.gens() {
            out[g.stage] += 1;
        }
        out
    }
}

/// Builds a minimal semi-free resolution of `m` degree by degree.
///
/// In degree `n`: first add cycles `e` with `∂e = 0` hitting a basis of
/// `coker H^n(eps)`; then, in rounds, add `e` of degree `n` with `∂e = ζ`
/// for a basis `[ζ]` of `ker H^{n+1}(eps)` and `eps(e) = m'` solving
/// `∂m' = eps(ζ)`. Every `ζ` lives in degree `n + 1` where no generator
/// exists yet, so its coefficients have positive degree.
pub fn minimal_semifree_resolution<S: Scalar>(
    m: Arc<ExplicitDgModule<S>>,
    opts: ResolveOptions,
) -> Result<ResolutionResult<S>, ResolveError> {
    let algebra = m.algebra_ref();
    let max_rounds = opts.max_rounds.unwrap_or(algebra.top().saturating_sub(1).max(1));
    let top = m.top();
    if top - 1 < m.low() {
        return Err(ResolveError::TruncationTooSmall { requested: top, minimum: m.low() + 1 });
    }
    let bottom = (m.low()..top).find(|&n| module_cohomology(&m, n).dim() > 0);
    let mut builder = Builder { f: SemiFreeDgModule::new(algebra), m: m.clone(), eps: Vec::new(), log: Vec::new() };
    let Some(bottom) = bottom else {
        return Ok(ResolutionResult {
            f: builder.f,
            module: m,
            eps: Vec::new(),
            bottom: top - 1,
            certified_upto: top - 1,
            saturated: false,
            log: Vec::new(),
        });
    };
    // A semi-free module with generators from degree `bottom` is known up to
    // `D + bottom`; we also need `M` one degree past each cohomology degree.
    let top = top.min(builder.f.algebra().top() as i32 + bottom);
    let mut cycles_next: Option<Vec<SparseVec<S>>> = None;
    for n in bottom..top {
        let mut entry = DegreeLog { degree: n, surjectivity: 0, kernel_rounds: Vec::new() };
        let cycles = cycles_next.take().unwrap_or_else(|| builder.cycles_of_f(n));
        entry.surjectivity = builder.cover_cokernel(n, &cycles);
        if n < top - 1 {
            let mut rounds = 0;
            loop {
                let z = builder.cycles_of_f(n + 1);
                let killers = builder.kernel_classes(n, &z);
                if killers.is_empty() {
                    cycles_next = Some(z);
                    break;
                }
                if rounds == max_rounds {
                    entry.kernel_rounds.push(0);
                    builder.log.push(entry);
                    return Ok(builder.finish(bottom, n, true));
                }
                entry.kernel_rounds.push(killers.len());
                builder.kill(n, killers)?;
                rounds += 1;
            }
        }
        builder.log.push(entry);
    }
    Ok(builder.finish(bottom, top - 1, false))
}

struct Builder<S> {
    f: SemiFreeDgModule<S>,
    m: Arc<ExplicitDgModule<S>>,
    eps: Vec<SparseVec<S>>,
    log: Vec<DegreeLog>,
}

impl<S: Scalar> Builder<S> {
    fn finish(self, bottom: i32, certified_upto: i32, saturated: bool) -> ResolutionResult<S> {
        ResolutionResult { f: self.f, module: self.m, eps: self.eps, bottom, certified_upto, saturated, log: self.log }
    }

    fn expanded(&self) -> ExplicitDgModule<S> {
        ExplicitDgModule::expand(&self.f)
    }

    fn eps_apply(&self, fx: &ExplicitDgModule<S>, n: i32, x: &SparseVec<S>) -> SparseVec<S> {
        let (_, index) = fx.semifree().expect("expanded module");
        let el = index.from_flat(n, x);
        let mut out = SparseVec::zero();
        for (g, c) in el.terms() {
            let q = (n - self.f.degree(*g)) as usize;
            out.add_scaled(&self.m.act(q, c, self.f.degree(*g), &self.eps[*g]), &S::one());
        }
        out
    }

    fn cycles_of_f(&self, n: i32) -> Vec<SparseVec<S>> {
        let fx = self.expanded();
        if fx.dim(n) == 0 {
            return Vec::new();
        }
        kernel_basis(&fx.d_matrix(n)).vectors
    }

    /// Adds cycles covering `Z^n(M) / (B^n(M) + eps(Z^n F))`.
    fn cover_cokernel(&mut self, n: i32, cycles: &[SparseVec<S>]) -> usize {
        let fx = self.expanded();
        let hm = module_cohomology(&self.m, n);
        let mut w: Vec<SparseVec<S>> = Vec::new();
        if n > self.m.low() {
            w.extend(image_basis(&self.m.d_matrix(n - 1)).vectors);
        }
        w.extend(cycles.iter().map(|z| self.eps_apply(&fx, n, z)));
        let coker = Quotient::new_unchecked(self.m.dim(n), hm.representatives(), &w);
        let added = coker.dim();
        for rep in coker.representatives() {
            let name = format!("e{}", self.f.len());
            self.f.push(name, n, FreeElement::zero()).expect("a cycle generator is always admissible");
            self.eps.push(rep.clone());
        }
        added
    }

    /// Cocycles `ζ ∈ F^{n+1}` with `eps(ζ)` a boundary, modulo `B^{n+1}(F)`.
    fn kernel_classes(&self, n: i32, z: &[SparseVec<S>]) -> Vec<SparseVec<S>> {
        if z.is_empty() {
            return Vec::new();
        }
        let fx = self.expanded();
        let dm = self.m.dim(n + 1);
        let mut cols: Vec<SparseVec<S>> = z.iter().map(|v| self.eps_apply(&fx, n + 1, v)).collect();
        let boundaries_m = if n >= self.m.low() { image_basis(&self.m.d_matrix(n)).vectors } else { Vec::new() };
        cols.extend(boundaries_m.iter().cloned());
        let rel = kernel_basis(&Matrix::from_columns(dm, cols));
        let dying: Vec<SparseVec<S>> =
            rel.vectors.iter().map(|r| r.slice(0, z.len()).combine(z)).filter(|v| !v.is_zero()).collect();
        if dying.is_empty() {
            return Vec::new();
        }
        let boundaries_f = if fx.dim(n) > 0 { image_basis(&fx.d_matrix(n)).vectors } else { Vec::new() };
        Quotient::new_unchecked(fx.dim(n + 1), &dying, &boundaries_f).representatives().to_vec()
    }

    fn kill(&mut self, n: i32, killers: Vec<SparseVec<S>>) -> Result<(), ResolveError> {
        let fx = self.expanded();
        let (_, index) = fx.semifree().expect("expanded module");
        let dm = if n >= self.m.low() { Some(self.m.d_matrix(n)) } else { None };
        let mut new = Vec::with_capacity(killers.len());
        for zeta in &killers {
            let target = self.eps_apply(&fx, n + 1, zeta);
            let m_prime = match &dm {
                Some(d) => solve(d, &target),
                None => target.is_zero().then(SparseVec::zero),
            }
            .ok_or_else(|| ResolveError::InvariantViolation(format!("a dying class in degree {} has no preimage", n + 1)))?;
            new.push((index.from_flat(n + 1, zeta), m_prime));
        }
        for (d, m_prime) in new {
            let name = format!("e{}", self.f.len());
            self.f.push(name, n, d)?;
            self.eps.push(m_prime);
        }
        Ok(())
    }
}

/// Verdict for one generator of a resolution under deletion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionVerdict {
    pub generator: String,
    /// Generators removed along with it (its upward closure).
    pub removed: usize,
    /// Least degree where the inclusion of what remains stops being a
    /// quasi-isomorphism; `None` if the generator is redundant on the window.
    pub breaks_at: Option<i32>,
}

/// For each generator `e`, removes `e` and every generator whose
/// differential depends on it, and tests whether the inclusion of the
/// remaining submodule is still a quasi-isomorphism on the window.
///
/// The window runs to `certified_upto`, or one degree further for a
/// saturated resolution, whose newest generators only affect that degree.
pub fn deletion_check<S: Scalar>(res: &ResolutionResult<S>) -> Result<Vec<DeletionVerdict>, ResolveError> {
    let fx = res.expanded();
    let upto = if res.saturated { (res.certified_upto + 1).min(fx.top() - 1) } else { res.certified_upto };
    let mut out = Vec::with_capacity(res.f.len());
    for (i, g) in res.f.gens().iter().enumerate() {
        let gone = res.f.upward_closure(i);
        let (sub, kept) = res.f.restricted(&gone);
        let (_, index) = fx.semifree().expect("expanded module");
        let images = kept
            .iter()
            .map(|&k| index.to_flat(res.f.degree(k), &FreeElement::term(k, SparseVec::unit(0))))
            .collect();
        let incl = DgMorphism::from_generators(Arc::new(ExplicitDgModule::expand(&sub)), fx.clone(), images);
        let upto = upto.min(incl.source().top() - 1);
        let report = is_quasi_iso_upto(&incl, upto)?;
        out.push(DeletionVerdict {
            generator: g.name.clone(),
            removed: gone.iter().filter(|&&b| b).count(),
            breaks_at: report.first_failure(),
        });
    }
    Ok(out)
}
