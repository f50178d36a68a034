use serde::Serialize;

use crate::dgmod::GradedModule;
use crate::exactla::{cohomology_quotient, kernel_basis, Matrix, Quotient, SparseVec};
use crate::gralg::{AlgebraRef, TruncatedDgAlgebra};
use crate::scalar::Scalar;

use super::ResolveError;

/// Degreewise coordinates on `⊕_g R(-t_g)`: in internal degree `w` the
/// blocks are `R^{w - t_g}` in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeLayout {
    pub degrees: Vec<i32>,
    ring_top: usize,
}

impl FreeLayout {
    pub fn new<S: Scalar>(ring: &TruncatedDgAlgebra<S>, degrees: Vec<i32>) -> Self {
        FreeLayout { degrees, ring_top: ring.top() }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `(generator, offset, ring degree)` for each block present in degree `w`.
    pub fn blocks<S: Scalar>(&self, ring: &TruncatedDgAlgebra<S>, w: i32) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (g, &t) in self.degrees.iter().enumerate() {
            let q = w - t;
            if q >= 0 && q as usize <= self.ring_top {
                out.push((g, off, q as usize));
                off += ring.dim(q as usize);
            }
        }
        out
    }

    pub fn dim<S: Scalar>(&self, ring: &TruncatedDgAlgebra<S>, w: i32) -> usize {
        self.blocks(ring, w).iter().map(|&(_, _, q)| ring.dim(q)).sum()
    }

    pub fn offset<S: Scalar>(&self, ring: &TruncatedDgAlgebra<S>, w: i32, g: usize) -> Option<usize> {
        self.blocks(ring, w).iter().find(|b| b.0 == g).map(|b| b.1)
    }

    /// Splits a flat vector of degree `w` into `(generator, coefficient)`.
    pub fn split<S: Scalar>(&self, ring: &TruncatedDgAlgebra<S>, w: i32, v: &SparseVec<S>) -> Vec<(usize, SparseVec<S>)> {
        self.blocks(ring, w)
            .iter()
            .map(|&(g, off, q)| (g, v.slice(off, off + ring.dim(q))))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// `r · v` for `r ∈ R^p` and `v` of degree `w`.
    pub fn act<S: Scalar>(
        &self,
        ring: &TruncatedDgAlgebra<S>,
        p: usize,
        r: &SparseVec<S>,
        w: i32,
        v: &SparseVec<S>,
    ) -> SparseVec<S> {
        let target = self.blocks(ring, w + p as i32);
        let mut out = SparseVec::zero();
        for (g, off, q) in self.blocks(ring, w) {
            let c = v.slice(off, off + ring.dim(q));
            if c.is_zero() {
                continue;
            }
            let Some(&(_, toff, _)) = target.iter().find(|b| b.0 == g) else {
                continue;
            };
            out.add_scaled(&ring.mul(p, r, q, &c).shifted(toff), &S::one());
        }
        out
    }
}

/// `⊕ R(-t_g) -> target` given the images of the generators, as a matrix
/// in internal degree `w`.
fn map_matrix<S: Scalar>(
    ring: &TruncatedDgAlgebra<S>,
    source: &FreeLayout,
    images: &[SparseVec<S>],
    target_dim: usize,
    w: i32,
    act: impl Fn(usize, &SparseVec<S>, i32, &SparseVec<S>) -> SparseVec<S>,
) -> Matrix<S> {
    let mut cols = Vec::with_capacity(source.dim(ring, w));
    for (g, _, q) in source.blocks(ring, w) {
        for a in 0..ring.dim(q) {
            cols.push(act(q, &SparseVec::unit(a), source.degrees[g], &images[g]));
        }
    }
    Matrix::from_columns(target_dim, cols)
}

/// A minimal graded free resolution `... -> F_1 -> F_0 -> N`, computed on
/// internal degrees `low..=window`.
#[derive(Clone, Debug)]
pub struct MinimalFreeResolution<S> {
    pub module: GradedModule<S>,
    pub low: i32,
    pub window: i32,
    pub layouts: Vec<FreeLayout>,
    /// Images of the stage-0 generators in `N`.
    pub eps: Vec<SparseVec<S>>,
    /// `d[i - 1][g]`: image of stage-`i` generator `g` in `F_{i-1}`.
    pub d: Vec<Vec<SparseVec<S>>>,
    /// Set when the kernel of the last map vanishes on the window.
    pub terminated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProjDim {
    Finite(usize),
    AtLeast(usize),
}

impl<S: Scalar> MinimalFreeResolution<S> {
    pub fn ring(&self) -> &TruncatedDgAlgebra<S> {
        self.module.algebra()
    }

    pub fn stages(&self) -> usize {
        self.layouts.len()
    }

    /// Internal degrees of the generators, stage by stage.
    pub fn betti(&self) -> Vec<Vec<i32>> {
        self.layouts.iter().map(|l| l.degrees.clone()).collect()
    }

    pub fn betti_dims(&self) -> Vec<usize> {
        self.layouts.iter().map(FreeLayout::len).collect()
    }

    pub fn proj_dim(&self) -> ProjDim {
        let last = self.layouts.iter().rposition(|l| !l.is_empty());
        match (self.terminated, last) {
            (true, Some(n)) => ProjDim::Finite(n),
            (true, None) => ProjDim::Finite(0),
            (false, _) => ProjDim::AtLeast(self.stages().saturating_sub(1)),
        }
    }

    /// Matrix of `d_i: F_i -> F_{i-1}` in internal degree `w`.
    pub fn d_matrix(&self, i: usize, w: i32) -> Matrix<S> {
        let ring = self.ring();
        let target = &self.layouts[i - 1];
        map_matrix(ring, &self.layouts[i], &self.d[i - 1], target.dim(ring, w), w, |p, r, t, v| {
            target.act(ring, p, r, t, v)
        })
    }

    /// Matrix of `eps: F_0 -> N` in internal degree `w`.
    pub fn eps_matrix(&self, w: i32) -> Matrix<S> {
        let ring = self.ring();
        map_matrix(ring, &self.layouts[0], &self.eps, self.module.dim(w), w, |p, r, t, v| self.module.act(p, r, t, v))
    }

    /// Spots where the augmented complex `... -> F_1 -> F_0 -> N -> 0` fails
    /// to be exact on the window, as `(stage, internal degree, dim)`.
    /// Stage `-1` stands for the cokernel of the augmentation; the kernel of
    /// the last map counts only when the resolution claims to terminate.
    pub fn defects(&self) -> Result<Vec<(i32, i32, usize)>, ResolveError> {
        let ring = self.ring();
        let mut out = Vec::new();
        for w in self.low..=self.window {
            let eps = self.eps_matrix(w);
            let onto = crate::exactla::rank(&eps);
            if onto != self.module.dim(w) {
                out.push((-1, w, self.module.dim(w) - onto));
            }
            let mut outgoing = eps;
            for i in 0..self.stages() {
                let dim = self.layouts[i].dim(ring, w);
                let incoming = (i + 1 < self.stages()).then(|| self.d_matrix(i + 1, w));
                if let Some(inc) = &incoming {
                    if !outgoing.compose(inc).is_zero() {
                        return Err(ResolveError::InvariantViolation(format!("d∘d ≠ 0 at stage {i}, degree {w}")));
                    }
                }
                let last = i + 1 == self.stages();
                if !last || self.terminated {
                    let h = cohomology_quotient(dim, incoming.as_ref(), Some(&outgoing));
                    if h.dim() > 0 {
                        out.push((i as i32, w, h.dim()));
                    }
                }
                match incoming {
                    Some(m) => outgoing = m,
                    None => break,
                }
            }
        }
        Ok(out)
    }

    /// Checks `ε` onto, `im d_1 = ker ε`, `im d_{i+1} = ker d_i` and
    /// `d∘d = 0` in every internal degree of the window.
    pub fn check_exactness(&self) -> Result<(), ResolveError> {
        match self.defects()?.first() {
            None => Ok(()),
            Some(&(i, w, _)) => Err(ResolveError::InvariantViolation(format!("not exact at stage {i}, degree {w}"))),
        }
    }

    /// Stages (with `-1` for the augmentation) that fail to be exact.
    pub fn non_exact_stages(&self) -> Result<Vec<i32>, ResolveError> {
        let mut s: Vec<i32> = self.defects()?.into_iter().map(|d| d.0).collect();
        s.sort_unstable();
        s.dedup();
        Ok(s)
    }

    /// Every matrix entry has positive degree.
    pub fn is_minimal(&self) -> bool {
        let ring = self.ring();
        self.d.iter().enumerate().all(|(k, images)| {
            let source = &self.layouts[k + 1];
            let target = &self.layouts[k];
            images.iter().enumerate().all(|(g, v)| {
                target.split(ring, source.degrees[g], v).iter().all(|(h, _)| target.degrees[*h] < source.degrees[g])
            })
        })
    }

    /// `dim Tor_i(N, k)` on the window, by tensoring the resolution with `k`
    /// and taking homology. For a minimal resolution the differential
    /// vanishes and these are the Betti numbers.
    pub fn tor_dims(&self) -> Vec<usize> {
        tor_of_free_complex(self.ring(), &self.layouts, &self.d, self.window)
    }
}

/// Homology of `k ⊗_R F_•` for a complex of graded free modules given by
/// generator images, counting only generators of internal degree `<= window`.
pub fn tor_of_free_complex<S: Scalar>(
    ring: &TruncatedDgAlgebra<S>,
    layouts: &[FreeLayout],
    d: &[Vec<SparseVec<S>>],
    window: i32,
) -> Vec<usize> {
    // k ⊗ F_i has basis the generators; the differential keeps degree-0
    // coefficients only.
    let reduced: Vec<Matrix<S>> = d
        .iter()
        .enumerate()
        .map(|(k, images)| {
            let source = &layouts[k + 1];
            let target = &layouts[k];
            let cols = images
                .iter()
                .enumerate()
                .map(|(g, v)| {
                    let pairs = target
                        .split(ring, source.degrees[g], v)
                        .into_iter()
                        .filter(|(h, _)| target.degrees[*h] == source.degrees[g])
                        .map(|(h, c)| (h, c.get(0)))
                        .collect();
                    SparseVec::from_pairs(pairs)
                })
                .collect();
            Matrix::from_columns(target.len(), cols)
        })
        .collect();
    let mut out = Vec::with_capacity(layouts.len());
    for (i, layout) in layouts.iter().enumerate() {
        let incoming = reduced.get(i);
        let outgoing = if i > 0 { Some(&reduced[i - 1]) } else { None };
        let h = cohomology_quotient(layout.len(), incoming, outgoing);
        let count = h
            .representatives()
            .iter()
            .filter(|v| v.iter().all(|(g, _)| layout.degrees[g] <= window))
            .count();
        out.push(count);
    }
    out
}

/// Builds the minimal graded free resolution of `n` through stage `stages`,
/// on internal degrees up to `window`.
pub fn graded_minimal_free_resolution<S: Scalar>(
    n: &GradedModule<S>,
    stages: usize,
    window: i32,
) -> Result<MinimalFreeResolution<S>, ResolveError> {
    let ring: AlgebraRef<S> = n.algebra_ref();
    let low = n.low();
    let certified = n.ring_certified().min(ring.top()) as i32;
    if window < low + stages as i32 + 1 {
        return Err(ResolveError::WindowTooSmall { needed: low + stages as i32 + 1, window });
    }
    if window - low > certified || window > n.top() {
        return Err(ResolveError::WindowTooSmall { needed: window, window: (low + certified).min(n.top()) });
    }
    let r = &*ring;
    // Stage 0: generators of N modulo R⁺N.
    let mut degrees0 = Vec::new();
    let mut eps = Vec::new();
    let module_span: Vec<Vec<SparseVec<S>>> =
        (low..=window).map(|w| (0..n.dim(w)).map(SparseVec::unit).collect()).collect();
    for w in low..=window {
        let dec = decomposables(r, low, &module_span, w, |p, a, t, v| n.act(p, a, t, v));
        let q = Quotient::new_unchecked(n.dim(w), &module_span[(w - low) as usize], &dec);
        for rep in q.representatives() {
            degrees0.push(w);
            eps.push(rep.clone());
        }
    }
    let mut layouts = vec![FreeLayout::new(r, degrees0)];
    let mut d: Vec<Vec<SparseVec<S>>> = Vec::new();
    let mut terminated = false;
    for i in 0..=stages {
        let layout = &layouts[i];
        // Kernel of the last map, degree by degree.
        let kernel: Vec<Vec<SparseVec<S>>> = (low..=window)
            .map(|w| {
                let dim = layout.dim(r, w);
                if dim == 0 {
                    return Vec::new();
                }
                let m = if i == 0 {
                    map_matrix(r, layout, &eps, n.dim(w), w, |p, a, t, v| n.act(p, a, t, v))
                } else {
                    let target = &layouts[i - 1];
                    map_matrix(r, layout, &d[i - 1], target.dim(r, w), w, |p, a, t, v| target.act(r, p, a, t, v))
                };
                kernel_basis(&m).vectors
            })
            .collect();
        if kernel.iter().all(Vec::is_empty) {
            terminated = true;
            break;
        }
        if i == stages {
            break;
        }
        let mut degrees = Vec::new();
        let mut images = Vec::new();
        for w in low..=window {
            let dec = decomposables(r, low, &kernel, w, |p, a, t, v| layout.act(r, p, a, t, v));
            let q = Quotient::new_unchecked(layout.dim(r, w), &kernel[(w - low) as usize], &dec);
            for rep in q.representatives() {
                degrees.push(w);
                images.push(rep.clone());
            }
        }
        layouts.push(FreeLayout::new(r, degrees));
        d.push(images);
    }
    Ok(MinimalFreeResolution { module: n.clone(), low, window, layouts, eps, d, terminated })
}

/// `R⁺ · K` in internal degree `w`, where `k[j]` spans `K` in degree `low + j`.
fn decomposables<S: Scalar>(
    ring: &TruncatedDgAlgebra<S>,
    low: i32,
    k: &[Vec<SparseVec<S>>],
    w: i32,
    act: impl Fn(usize, &SparseVec<S>, i32, &SparseVec<S>) -> SparseVec<S>,
) -> Vec<SparseVec<S>> {
    let mut span = Vec::new();
    for p in 1..=ring.top().min((w - low).max(0) as usize) {
        let src = w - p as i32;
        for a in 0..ring.dim(p) {
            for v in &k[(src - low) as usize] {
                let x = act(p, &SparseVec::unit(a), src, v);
                if !x.is_zero() {
                    span.push(x);
                }
            }
        }
    }
    span
}
