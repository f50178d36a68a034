use serde::Serialize;

use crate::dgmod::GradedModule;
use crate::exactla::{cohomology_quotient, Matrix, SparseVec};
use crate::gralg::TruncatedDgAlgebra;
use crate::resolve::{graded_minimal_free_resolution, FreeLayout, MinimalFreeResolution, ProjDim, ResolveError};
use crate::scalar::Scalar;

/// A value known exactly, or only bounded below by the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    Value(usize),
    AtLeast(usize),
}

impl Bound {
    /// The largest value certainly below or equal to the truth.
    pub fn lower(self) -> usize {
        match self {
            Bound::Value(v) | Bound::AtLeast(v) => v,
        }
    }

    pub fn value(self) -> Option<usize> {
        match self {
            Bound::Value(v) => Some(v),
            Bound::AtLeast(_) => None,
        }
    }
}

/// Blocks `(generator, offset, ring degree)` of `Hom_R(F_i, R)` in internal
/// degree `w`: a map sends `e_g` into `R^{t_g + w}`.
fn hom_blocks<S: Scalar>(ring: &TruncatedDgAlgebra<S>, layout: &FreeLayout, w: i32) -> (Vec<(usize, usize, usize)>, usize) {
    let mut out = Vec::new();
    let mut off = 0;
    for (g, &t) in layout.degrees.iter().enumerate() {
        let q = t + w;
        if q >= 0 && q as usize <= ring.top() {
            out.push((g, off, q as usize));
            off += ring.dim(q as usize);
        }
    }
    (out, off)
}

/// Dual of `d_{i+1}` in internal degree `w`:
/// `(δf)(e_h) = Σ_g (-1)^{|r| w} r_{hg} f(e_g)` for `∂e_h = Σ r_{hg} e_g`.
fn dual_matrix<S: Scalar>(res: &MinimalFreeResolution<S>, i: usize, w: i32) -> Matrix<S> {
    let ring = res.ring();
    let (src_blocks, src_dim) = hom_blocks(ring, &res.layouts[i], w);
    let (dst_blocks, dst_dim) = hom_blocks(ring, &res.layouts[i + 1], w);
    let source = &res.layouts[i];
    let target = &res.layouts[i + 1];
    let mut cols = vec![Vec::new(); src_dim];
    for &(h, hoff, _) in &dst_blocks {
        let th = target.degrees[h];
        for (g, r) in source.split(ring, th, &res.d[i][h]) {
            let Some(&(_, goff, gq)) = src_blocks.iter().find(|b| b.0 == g) else {
                continue;
            };
            let p = (th - source.degrees[g]) as usize;
            let sign = S::sign(p as i64 * w as i64);
            for b in 0..ring.dim(gq) {
                let img = ring.mul(p, &r, gq, &SparseVec::unit(b));
                for (k, c) in img.iter() {
                    cols[goff + b].push((hoff + k, sign.clone() * c.clone()));
                }
            }
        }
    }
    Matrix::from_columns(dst_dim, cols.into_iter().map(SparseVec::from_pairs).collect())
}

/// `dim Ext^i(N, R)` summed over the internal degrees the window certifies,
/// as `(internal degree, dim)` pairs with nonzero dimension.
///
/// Only degrees `w` for which every `R^{t + w}` touched by stages
/// `i - 1, i, i + 1` lies within the certified part of `R` are used.
pub fn ext_into_ring<S: Scalar>(res: &MinimalFreeResolution<S>, i: usize, certified: usize) -> Vec<(i32, usize)> {
    if i >= res.stages() {
        return Vec::new();
    }
    let ring = res.ring();
    let lo_stage = i.saturating_sub(1);
    let hi_stage = (i + 1).min(res.stages() - 1);
    let touched = (lo_stage..=hi_stage).flat_map(|s| res.layouts[s].degrees.iter().copied());
    let Some(max_t) = touched.max() else {
        return Vec::new();
    };
    let has_next = i + 1 < res.stages();
    if !has_next && !res.terminated {
        return Vec::new();
    }
    let mut out = Vec::new();
    for w in -max_t..=(certified as i32 - max_t) {
        let (_, dim) = hom_blocks(ring, &res.layouts[i], w);
        if dim == 0 {
            continue;
        }
        let outgoing = has_next.then(|| dual_matrix(res, i, w));
        let incoming = (i > 0).then(|| dual_matrix(res, i - 1, w));
        let h = cohomology_quotient(dim, incoming.as_ref(), outgoing.as_ref());
        if h.dim() > 0 {
            out.push((w, h.dim()));
        }
    }
    out
}

/// Least `i < cutoff` with `Ext^i(N, R) ≠ 0`, computed from the minimal
/// free resolution; `AtLeast(cutoff)` if none is found.
pub fn grade<S: Scalar>(n: &GradedModule<S>, cutoff: usize, window: i32) -> Result<Bound, ResolveError> {
    let res = graded_minimal_free_resolution(n, cutoff, window)?;
    Ok(grade_from_resolution(&res, cutoff, n.ring_certified()))
}

/// [`grade`] on an already computed resolution.
pub fn grade_from_resolution<S: Scalar>(res: &MinimalFreeResolution<S>, cutoff: usize, certified: usize) -> Bound {
    for i in 0..cutoff {
        if i >= res.stages() {
            break;
        }
        if !ext_into_ring(res, i, certified).is_empty() {
            return Bound::Value(i);
        }
    }
    Bound::AtLeast(cutoff)
}

/// `depth R`, the grade of `k`.
pub fn depth<S: Scalar>(ring: &GradedModule<S>, cutoff: usize, window: i32) -> Result<Bound, ResolveError> {
    let k = GradedModule::trivial(ring.algebra_ref(), ring.ring_certified(), window);
    grade(&k, cutoff, window)
}

/// Projective dimension of `N` with the Betti profile as evidence.
pub fn proj_dim<S: Scalar>(n: &GradedModule<S>, stages: usize, window: i32) -> Result<(ProjDim, Vec<usize>), ResolveError> {
    let res = graded_minimal_free_resolution(n, stages, window)?;
    Ok((res.proj_dim(), res.betti_dims()))
}
