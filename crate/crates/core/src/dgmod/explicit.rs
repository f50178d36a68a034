use std::sync::Arc;

use crate::exactla::{Matrix, SparseVec};
use crate::gralg::{AlgebraRef, TensorIndex, TruncatedDgAlgebra};
use crate::scalar::Scalar;

use super::free::{suspended_name, FreeElement, SemiFreeDgModule};
use super::ModuleError;

/// Coordinates of the expansion `F^n = ⊕_i A^{n - |e_i|} e_i` of a
/// semi-free module. Blocks appear in generator order, so appending a
/// generator never moves existing coordinates.
#[derive(Clone, Debug)]
pub struct ExpandIndex {
    low: i32,
    blocks: Vec<Vec<(usize, usize)>>,
    dims: Vec<usize>,
}

impl ExpandIndex {
    pub fn new<S: Scalar>(f: &SemiFreeDgModule<S>) -> Self {
        let low = f.low();
        let top = f.top();
        let a = f.algebra();
        let mut blocks = Vec::new();
        let mut dims = Vec::new();
        for n in low..=top {
            let mut offset = 0;
            let mut bl = Vec::new();
            for (i, g) in f.gens().iter().enumerate() {
                let q = n - g.degree;
                if q >= 0 && q as usize <= a.top() {
                    bl.push((i, offset));
                    offset += a.dim(q as usize);
                }
            }
            blocks.push(bl);
            dims.push(offset);
        }
        ExpandIndex { low, blocks, dims }
    }

    fn slot(&self, n: i32) -> Option<usize> {
        let k = n - self.low;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.slot(n).map_or(0, |k| self.dims[k])
    }

    pub fn block_offset(&self, n: i32, generator: usize) -> Option<usize> {
        let bl = &self.blocks[self.slot(n)?];
        bl.binary_search_by_key(&generator, |(g, _)| *g).ok().map(|k| bl[k].1)
    }

    /// `(generator, coefficient index)` of a flat coordinate.
    pub fn split(&self, n: i32, idx: usize) -> (usize, usize) {
        let bl = &self.blocks[self.slot(n).expect("degree in range")];
        let k = bl.partition_point(|(_, o)| *o <= idx) - 1;
        (bl[k].0, idx - bl[k].1)
    }

    pub fn to_flat<S: Scalar>(&self, n: i32, x: &FreeElement<S>) -> SparseVec<S> {
        let mut pairs = Vec::new();
        for (g, c) in x.terms() {
            let off = self.block_offset(n, *g).expect("coefficient degree inside the window");
            pairs.extend(c.iter().map(|(i, v)| (off + i, v.clone())));
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn from_flat<S: Scalar>(&self, n: i32, v: &SparseVec<S>) -> FreeElement<S> {
        let mut terms: Vec<(usize, Vec<(usize, S)>)> = Vec::new();
        for (idx, c) in v.iter() {
            let (g, i) = self.split(n, idx);
            match terms.last_mut() {
                Some((h, t)) if *h == g => t.push((i, c.clone())),
                _ => terms.push((g, vec![(i, c.clone())])),
            }
        }
        FreeElement::from_terms(terms.into_iter().map(|(g, t)| (g, SparseVec::from_pairs(t))).collect())
    }
}

#[derive(Clone, Debug)]
enum Kind<S> {
    Zero,
    Trivial,
    Regular,
    Diagonal { base: AlgebraRef<S>, index: TensorIndex },
    Expanded { module: Arc<SemiFreeDgModule<S>>, index: ExpandIndex },
    Suspension { inner: Arc<ExplicitDgModule<S>>, shift: i32 },
}

/// A left DG module over a truncated algebra, known degreewise on
/// `low..=top`. Degrees outside that range are zero below and unknown above.
#[derive(Clone, Debug)]
pub struct ExplicitDgModule<S> {
    algebra: AlgebraRef<S>,
    low: i32,
    top: i32,
    kind: Kind<S>,
}

impl<S: Scalar> ExplicitDgModule<S> {
    pub fn zero(algebra: AlgebraRef<S>) -> Self {
        let top = algebra.top() as i32;
        ExplicitDgModule { algebra, low: 0, top, kind: Kind::Zero }
    }

    /// `k` in degree 0, acted on through the augmentation.
    pub fn trivial(algebra: AlgebraRef<S>) -> Self {
        let top = algebra.top() as i32;
        ExplicitDgModule { algebra, low: 0, top, kind: Kind::Trivial }
    }

    /// `A` as a left module over itself.
    pub fn regular(algebra: AlgebraRef<S>) -> Self {
        let top = algebra.top() as i32;
        ExplicitDgModule { algebra, low: 0, top, kind: Kind::Regular }
    }

    /// `A` as a module over `envelope = A ⊗ A^op`:
    /// `(a⊗b)·m = (-1)^{|b||m|} a m b`.
    pub fn diagonal(base: AlgebraRef<S>, envelope: AlgebraRef<S>) -> Self {
        assert_eq!(base.top(), envelope.top(), "envelope must share the window");
        let index = TensorIndex::new(base.dims(), base.dims(), base.top());
        let top = base.top() as i32;
        ExplicitDgModule { algebra: envelope, low: 0, top, kind: Kind::Diagonal { base, index } }
    }

    /// `F^# = ⊕ A e_i` materialized degreewise.
    pub fn expand(f: &SemiFreeDgModule<S>) -> Self {
        Self::expand_arc(Arc::new(f.clone()))
    }

    pub fn expand_arc(f: Arc<SemiFreeDgModule<S>>) -> Self {
        let index = ExpandIndex::new(&f);
        ExplicitDgModule { algebra: f.algebra_ref(), low: f.low(), top: f.top(), kind: Kind::Expanded { module: f, index } }
    }

    /// `Σ^i M` with `(Σ^i M)^j = M^{j+i}`.
    pub fn suspension(&self, shift: i32) -> Self {
        if shift == 0 {
            return self.clone();
        }
        if let Kind::Suspension { inner, shift: s } = &self.kind {
            return if s + shift == 0 { (**inner).clone() } else { inner.suspension(s + shift) };
        }
        ExplicitDgModule {
            algebra: self.algebra.clone(),
            low: self.low - shift,
            top: self.top - shift,
            kind: Kind::Suspension { inner: Arc::new(self.clone()), shift },
        }
    }

    pub fn algebra(&self) -> &TruncatedDgAlgebra<S> {
        &self.algebra
    }

    pub fn algebra_ref(&self) -> AlgebraRef<S> {
        self.algebra.clone()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    /// The semi-free module behind an expansion.
    pub fn semifree(&self) -> Option<(&SemiFreeDgModule<S>, &ExpandIndex)> {
        match &self.kind {
            Kind::Expanded { module, index } => Some((module, index)),
            _ => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, Kind::Trivial)
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < self.low || n > self.top {
            return 0;
        }
        match &self.kind {
            Kind::Zero => 0,
            Kind::Trivial => usize::from(n == 0),
            Kind::Regular | Kind::Diagonal { .. } => self.base().dim(n as usize),
            Kind::Expanded { index, .. } => index.dim(n),
            Kind::Suspension { inner, shift } => inner.dim(n + shift),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (self.low..=self.top).map(|n| self.dim(n)).collect()
    }

    fn base(&self) -> &TruncatedDgAlgebra<S> {
        match &self.kind {
            Kind::Diagonal { base, .. } => base,
            _ => &self.algebra,
        }
    }

    pub fn name(&self, n: i32, i: usize) -> String {
        match &self.kind {
            Kind::Zero => unreachable!("zero module has no basis"),
            Kind::Trivial => "1".into(),
            Kind::Regular | Kind::Diagonal { .. } => self.base().name(n as usize, i).to_string(),
            Kind::Expanded { module, index } => {
                let (g, a) = index.split(n, i);
                let gen = &module.gens()[g];
                let q = (n - gen.degree) as usize;
                if q == 0 {
                    gen.name.clone()
                } else {
                    format!("{}·{}", self.algebra.name(q, a), gen.name)
                }
            }
            Kind::Suspension { inner, shift } => suspended_name(&inner.name(n + shift, i), *shift),
        }
    }

    /// `a · m` for basis elements `a ∈ A^p`, `m ∈ M^n`; needs `n + p <= top`.
    pub fn act_basis(&self, p: usize, a: usize, n: i32, i: usize) -> SparseVec<S> {
        assert!(n + p as i32 <= self.top, "action leaves the window");
        match &self.kind {
            Kind::Zero => SparseVec::zero(),
            Kind::Trivial => {
                if p == 0 {
                    SparseVec::unit(i)
                } else {
                    SparseVec::zero()
                }
            }
            Kind::Regular => self.algebra.basis_product(p, a, n as usize, i).clone(),
            Kind::Diagonal { base, index } => {
                let (l, x, r, y) = index.split(p, a);
                let am = base.basis_product(l, x, n as usize, i);
                let amb = base.mul(l + n as usize, am, r, &SparseVec::unit(y));
                amb.scale(&S::sign((r as i64) * (n as i64)))
            }
            Kind::Expanded { module, index } => {
                let (g, b) = index.split(n, i);
                let q = (n - module.degree(g)) as usize;
                let prod = self.algebra.basis_product(p, a, q, b);
                let off = index.block_offset(n + p as i32, g).expect("product degree inside the window");
                prod.shifted(off)
            }
            Kind::Suspension { inner, shift } => {
                inner.act_basis(p, a, n + shift, i).scale(&S::sign(p as i64 * *shift as i64))
            }
        }
    }

    pub fn act(&self, p: usize, a: &SparseVec<S>, n: i32, m: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::zero();
        for (x, ca) in a.iter() {
            for (i, cm) in m.iter() {
                out.add_scaled(&self.act_basis(p, x, n, i), &(ca.clone() * cm.clone()));
            }
        }
        out
    }

    /// `∂m` for `m ∈ M^n`; needs `n < top`.
    pub fn d(&self, n: i32, m: &SparseVec<S>) -> SparseVec<S> {
        assert!(n < self.top, "differential leaves the window");
        if n < self.low {
            return SparseVec::zero();
        }
        match &self.kind {
            Kind::Zero | Kind::Trivial => SparseVec::zero(),
            Kind::Regular | Kind::Diagonal { .. } => self.base().d(n as usize, m),
            Kind::Expanded { module, index } => {
                let x = index.from_flat(n, m);
                index.to_flat(n + 1, &module.apply_d(n, &x))
            }
            Kind::Suspension { inner, shift } => inner.d(n + shift, m).scale(&S::sign(*shift as i64)),
        }
    }

    /// Matrix of `∂: M^n -> M^{n+1}`.
    pub fn d_matrix(&self, n: i32) -> Matrix<S> {
        let cols = (0..self.dim(n)).map(|i| self.d(n, &SparseVec::unit(i))).collect();
        Matrix::from_columns(self.dim(n + 1), cols)
    }

    /// Matrix of `m ↦ a·m` from `M^n` to `M^{n+p}`.
    pub fn action_matrix(&self, p: usize, a: &SparseVec<S>, n: i32) -> Matrix<S> {
        let cols = (0..self.dim(n)).map(|i| self.act(p, a, n, &SparseVec::unit(i))).collect();
        Matrix::from_columns(self.dim(n + p as i32), cols)
    }

    pub fn has_zero_differential(&self) -> bool {
        (self.low..self.top).all(|n| self.d_matrix(n).is_zero())
    }

    /// Checks `∂² = 0`, the unit law and the Leibniz rule
    /// `∂(a·m) = (∂a)·m + (-1)^{|a|} a·∂m` on basis pairs inside the window.
    pub fn verify(&self) -> Result<(), ModuleError> {
        let bad = |m: String| Err(ModuleError::InvariantViolation(m));
        let alg = self.algebra.clone();
        for n in self.low..self.top {
            if n + 2 <= self.top && !self.d_matrix(n + 1).compose(&self.d_matrix(n)).is_zero() {
                return bad(format!("∂² ≠ 0 in degree {n}"));
            }
        }
        for n in self.low..=self.top {
            for i in 0..self.dim(n) {
                if self.act_basis(0, 0, n, i) != SparseVec::unit(i) {
                    return bad(format!("unit does not act as identity on {}", self.name(n, i)));
                }
            }
        }
        for p in 0..alg.top() {
            for n in self.low..self.top - p as i32 {
                for a in 0..alg.dim(p) {
                    let av = SparseVec::unit(a);
                    let da = alg.d(p, &av);
                    for i in 0..self.dim(n) {
                        let m = SparseVec::unit(i);
                        let lhs = self.d(n + p as i32, &self.act_basis(p, a, n, i));
                        let mut rhs = self.act(p + 1, &da, n, &m);
                        rhs.add_scaled(&self.act(p, &av, n + 1, &self.d(n, &m)), &S::sign(p as i64));
                        if lhs != rhs {
                            return bad(format!("Leibniz rule fails on ({}, {})", alg.name(p, a), self.name(n, i)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether two modules agree on dimensions, action and differential.
    pub fn same_tables(&self, other: &Self) -> bool {
        if self.low != other.low || self.top != other.top || self.dims() != other.dims() {
            return false;
        }
        let alg = &self.algebra;
        for n in self.low..=self.top {
            if n < self.top && self.d_matrix(n) != other.d_matrix(n) {
                return false;
            }
            for p in 0..=alg.top().min((self.top - n) as usize) {
                for a in 0..alg.dim(p) {
                    for i in 0..self.dim(n) {
                        if self.act_basis(p, a, n, i) != other.act_basis(p, a, n, i) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
