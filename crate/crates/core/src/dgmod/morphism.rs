use std::sync::Arc;

use serde::Serialize;

use crate::exactla::{cohomology_quotient, rank, Matrix, Quotient, SparseVec};
use crate::scalar::Scalar;

use super::explicit::ExplicitDgModule;
use super::ModuleError;

#[derive(Clone, Debug)]
enum MapData<S> {
    /// One matrix per source degree, starting at `source.low()`.
    Components(Vec<Matrix<S>>),
    /// Images of the generators of a semi-free source.
    OnGenerators(Vec<SparseVec<S>>),
}

/// A degree-0 morphism of DG modules.
#[derive(Clone, Debug)]
pub struct DgMorphism<S> {
    source: Arc<ExplicitDgModule<S>>,
    target: Arc<ExplicitDgModule<S>>,
    data: MapData<S>,
}

impl<S: Scalar> DgMorphism<S> {
    pub fn identity(m: Arc<ExplicitDgModule<S>>) -> Self {
        let comps = (m.low()..=m.top()).map(|n| Matrix::identity(m.dim(n))).collect();
        DgMorphism { source: m.clone(), target: m, data: MapData::Components(comps) }
    }

    pub fn zero(source: Arc<ExplicitDgModule<S>>, target: Arc<ExplicitDgModule<S>>) -> Self {
        let comps = (source.low()..=source.top()).map(|n| Matrix::zero(target.dim(n), source.dim(n))).collect();
        DgMorphism { source, target, data: MapData::Components(comps) }
    }

    pub fn from_components(
        source: Arc<ExplicitDgModule<S>>,
        target: Arc<ExplicitDgModule<S>>,
        components: Vec<Matrix<S>>,
    ) -> Self {
        assert_eq!(components.len() as i32, source.top() - source.low() + 1, "one component per source degree");
        DgMorphism { source, target, data: MapData::Components(components) }
    }

    /// The A-linear extension of `e_i ↦ images[i]` out of an expanded
    /// semi-free module.
    pub fn from_generators(
        source: Arc<ExplicitDgModule<S>>,
        target: Arc<ExplicitDgModule<S>>,
        images: Vec<SparseVec<S>>,
    ) -> Self {
        let (f, _) = source.semifree().expect("generator images need a semi-free source");
        assert_eq!(images.len(), f.len(), "one image per generator");
        DgMorphism { source, target, data: MapData::OnGenerators(images) }
    }

    pub fn source(&self) -> &Arc<ExplicitDgModule<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExplicitDgModule<S>> {
        &self.target
    }

    pub fn generator_images(&self) -> Option<&[SparseVec<S>]> {
        match &self.data {
            MapData::OnGenerators(v) => Some(v),
            MapData::Components(_) => None,
        }
    }

    /// Image of a single source basis element of degree `n`.
    pub fn apply_basis(&self, n: i32, i: usize) -> SparseVec<S> {
        match &self.data {
            MapData::Components(c) => c[(n - self.source.low()) as usize].column(i).clone(),
            MapData::OnGenerators(images) => {
                let (f, index) = self.source.semifree().unwrap();
                let (g, b) = index.split(n, i);
                let q = (n - f.degree(g)) as usize;
                if n > self.target.top() || n < self.target.low() {
                    return SparseVec::zero();
                }
                self.target.act(q, &SparseVec::unit(b), f.degree(g), &images[g])
            }
        }
    }

    pub fn apply(&self, n: i32, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&self.apply_basis(n, i), c);
        }
        out
    }

    /// Matrix from `source^n` to `target^n`.
    pub fn component(&self, n: i32) -> Matrix<S> {
        let cols = (0..self.source.dim(n)).map(|i| self.apply_basis(n, i)).collect();
        Matrix::from_columns(self.target.dim(n), cols)
    }

    /// Checks that the map commutes with the differentials and, for maps
    /// given by components, that it is A-linear on basis pairs.
    pub fn verify(&self) -> Result<(), ModuleError> {
        let top = self.source.top().min(self.target.top());
        for n in self.source.low()..top {
            let left = self.component(n + 1).compose(&self.source.d_matrix(n));
            let right = self.target.d_matrix(n).compose(&self.component(n));
            if left != right {
                return Err(ModuleError::InvariantViolation(format!("map does not commute with ∂ in degree {n}")));
            }
        }
        if let MapData::Components(_) = self.data {
            let alg = self.source.algebra();
            for n in self.source.low()..=top {
                for p in 1..=alg.top().min((top - n).max(0) as usize) {
                    for a in 0..alg.dim(p) {
                        let av = SparseVec::unit(a);
                        for i in 0..self.source.dim(n) {
                            let m = SparseVec::unit(i);
                            let lhs = self.apply(n + p as i32, &self.source.act(p, &av, n, &m));
                            let rhs = self.target.act(p, &av, n, &self.apply_basis(n, i));
                            if lhs != rhs {
                                return Err(ModuleError::InvariantViolation(format!(
                                    "map is not A-linear in degree {n}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cohomology of a module at degree `n`; needs `n < top`.
pub fn module_cohomology<S: Scalar>(m: &ExplicitDgModule<S>, n: i32) -> Quotient<S> {
    let incoming = (n > m.low()).then(|| m.d_matrix(n - 1));
    let outgoing = (n < m.top()).then(|| m.d_matrix(n));
    cohomology_quotient(m.dim(n), incoming.as_ref(), outgoing.as_ref())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: i32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl DegreeComparison {
    pub fn bijective(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }

    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub upto: i32,
    pub degrees: Vec<DegreeComparison>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(DegreeComparison::bijective)
    }

    pub fn first_failure(&self) -> Option<i32> {
        self.degrees.iter().find(|c| !c.bijective()).map(|c| c.degree)
    }
}

/// Rank of `H^n(f)` together with the dimensions on both sides.
pub fn compare_cohomology<S: Scalar>(f: &DgMorphism<S>, n: i32) -> DegreeComparison {
    let hs = module_cohomology(&f.source, n);
    let ht = module_cohomology(&f.target, n);
    let cols = hs
        .representatives()
        .iter()
        .map(|z| ht.classify(&f.apply(n, z)).expect("a chain map sends cocycles to cocycles"))
        .collect();
    let m = Matrix::from_columns(ht.dim(), cols);
    DegreeComparison { degree: n, source_dim: hs.dim(), target_dim: ht.dim(), rank: rank(&m) }
}

/// Whether `H^n(f)` is bijective for every `n <= upto`.
pub fn is_quasi_iso_upto<S: Scalar>(f: &DgMorphism<S>, upto: i32) -> Result<QuasiIsoReport, ModuleError> {
    let available = f.source.top().min(f.target.top()) - 1;
    if upto > available {
        return Err(ModuleError::RangeExceeded { requested: upto, available });
    }
    let start = f.source.low().min(f.target.low());
    let degrees = (start..=upto).map(|n| compare_cohomology(f, n)).collect();
    Ok(QuasiIsoReport { upto, degrees })
}
