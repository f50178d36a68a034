use serde::Serialize;

use crate::exactla::{cohomology_quotient, Matrix, SparseVec};
use crate::scalar::Scalar;

use super::explicit::ExplicitDgModule;
use super::free::SemiFreeDgModule;

/// A cochain complex of finite-dimensional spaces on degrees `low..=high`.
///
/// The top term has no outgoing map; its cohomology is only meaningful when
/// `complete` is set (the complex is known to vanish above `high`).
#[derive(Clone, Debug)]
pub struct ComplexOfVectorSpaces<S> {
    pub low: i32,
    pub dims: Vec<usize>,
    /// `d[k]` maps degree `low + k` to `low + k + 1`.
    pub d: Vec<Matrix<S>>,
    pub complete: bool,
}

impl<S: Scalar> ComplexOfVectorSpaces<S> {
    pub fn empty() -> Self {
        ComplexOfVectorSpaces { low: 0, dims: Vec::new(), d: Vec::new(), complete: true }
    }

    pub fn high(&self) -> i32 {
        self.low + self.dims.len() as i32 - 1
    }

    /// Highest degree whose cohomology is determined.
    pub fn certified_high(&self) -> i32 {
        if self.complete {
            self.high()
        } else {
            self.high() - 1
        }
    }

    pub fn dim(&self, n: i32) -> usize {
        let k = n - self.low;
        if k < 0 {
            0
        } else {
            self.dims.get(k as usize).copied().unwrap_or(0)
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn differential_is_zero(&self) -> bool {
        self.d.iter().all(Matrix::is_zero)
    }

    pub fn check_d_squared(&self) -> bool {
        self.d.windows(2).all(|w| w[1].compose(&w[0]).is_zero())
    }

    pub fn cohomology_dim(&self, n: i32) -> usize {
        let k = n - self.low;
        if k < 0 || k as usize >= self.dims.len() {
            return 0;
        }
        let k = k as usize;
        let incoming = (k > 0).then(|| &self.d[k - 1]);
        let outgoing = self.d.get(k);
        cohomology_quotient(self.dims[k], incoming, outgoing).dim()
    }

    /// `(degree, dim H)` over the certified range.
    pub fn cohomology_dims(&self) -> Vec<(i32, usize)> {
        (self.low..=self.certified_high()).map(|n| (n, self.cohomology_dim(n))).collect()
    }
}

/// `Hom_A(F, N)`: a degree-`d` map is a choice of `f(e_i) ∈ N^{|e_i| + d}`
/// per generator, and `∂f = ∂_N f - (-1)^{|f|} f ∂_F`.
///
/// Degrees run over `N.low - max|e| ..= N.top - max|e|`, the range where
/// every component is known.
pub fn hom_complex<S: Scalar>(f: &SemiFreeDgModule<S>, n: &ExplicitDgModule<S>) -> ComplexOfVectorSpaces<S> {
    if f.is_empty() {
        return ComplexOfVectorSpaces::empty();
    }
    let max_e = f.gens().iter().map(|g| g.degree).max().unwrap();
    let lo = n.low() - max_e;
    let hi = n.top() - max_e;
    if hi < lo {
        return ComplexOfVectorSpaces::empty();
    }
    let offsets = |d: i32| -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(f.len());
        let mut acc = 0;
        for g in f.gens() {
            offs.push(acc);
            acc += n.dim(g.degree + d);
        }
        (offs, acc)
    };
    // users[j]: generators whose differential involves e_j, with coefficient.
    let mut users: Vec<Vec<(usize, usize, &SparseVec<S>)>> = vec![Vec::new(); f.len()];
    for (i, g) in f.gens().iter().enumerate() {
        for (j, c) in g.d.terms() {
            let q = (g.degree + 1 - f.degree(*j)) as usize;
            users[*j].push((i, q, c));
        }
    }
    let mut dims = Vec::new();
    let mut ds = Vec::new();
    for d in lo..=hi {
        let (_, total) = offsets(d);
        dims.push(total);
        if d == hi {
            break;
        }
        let (offs_next, total_next) = offsets(d + 1);
        let mut cols = Vec::with_capacity(total);
        for (j, gj) in f.gens().iter().enumerate() {
            let deg = gj.degree + d;
            for b in 0..n.dim(deg) {
                let m = SparseVec::unit(b);
                let mut pairs: Vec<(usize, S)> = Vec::new();
                for (idx, c) in n.d(deg, &m).iter() {
                    pairs.push((offs_next[j] + idx, c.clone()));
                }
                for &(i, q, c) in &users[j] {
                    // -(-1)^d (-1)^{d q} c·m lands in N^{|e_i| + d + 1}.
                    let sign = -S::sign(d as i64 * (1 + q as i64));
                    for (idx, v) in n.act(q, c, deg, &m).iter() {
                        pairs.push((offs_next[i] + idx, sign.clone() * v.clone()));
                    }
                }
                cols.push(SparseVec::from_pairs(pairs));
            }
        }
        ds.push(Matrix::from_columns(total_next, cols));
    }
    ComplexOfVectorSpaces { low: lo, dims, d: ds, complete: false }
}

/// `k ⊗_A F`: one basis vector per generator, with the differential given by
/// the augmentation of the degree-0 coefficients of `∂e_i`.
pub fn tensor_k<S: Scalar>(f: &SemiFreeDgModule<S>) -> ComplexOfVectorSpaces<S> {
    if f.is_empty() {
        return ComplexOfVectorSpaces::empty();
    }
    let lo = f.low();
    let hi = f.gens().iter().map(|g| g.degree).max().unwrap();
    let mut position = vec![0usize; f.len()];
    let mut dims = vec![0usize; (hi - lo + 1) as usize];
    for (i, g) in f.gens().iter().enumerate() {
        let k = (g.degree - lo) as usize;
        position[i] = dims[k];
        dims[k] += 1;
    }
    let mut cols: Vec<Vec<SparseVec<S>>> = dims.iter().map(|&n| vec![SparseVec::zero(); n]).collect();
    for (i, g) in f.gens().iter().enumerate() {
        let pairs: Vec<(usize, S)> = g
            .d
            .terms()
            .iter()
            .filter(|(j, _)| f.degree(*j) == g.degree + 1)
            .map(|(j, c)| (position[*j], c.get(0)))
            .collect();
        cols[(g.degree - lo) as usize][position[i]] = SparseVec::from_pairs(pairs);
    }
    let d = (0..dims.len().saturating_sub(1))
        .map(|k| Matrix::from_columns(dims[k + 1], std::mem::take(&mut cols[k])))
        .collect();
    ComplexOfVectorSpaces { low: lo, dims, d, complete: true }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HomotopyVerdict {
    /// `H(Hom_A(F, F))` vanishes in every degree of the window.
    TrivialOnWindow { low: i32, high: i32 },
    /// Least degree with a nonzero class.
    NontrivialClassFound(i32),
}

/// Tests `H(Hom_A(F, F)) = 0` on `window`, clipped to the degrees the
/// truncation determines.
pub fn is_homotopically_trivial<S: Scalar>(f: &SemiFreeDgModule<S>, window: (i32, i32)) -> HomotopyVerdict {
    let hom = hom_complex(f, &ExplicitDgModule::expand(f));
    let low = window.0.max(hom.low);
    let high = window.1.min(hom.certified_high());
    for n in low..=high {
        if hom.cohomology_dim(n) > 0 {
            return HomotopyVerdict::NontrivialClassFound(n);
        }
    }
    HomotopyVerdict::TrivialOnWindow { low, high }
}
