use std::sync::Arc;

use crate::exactla::{Matrix, SparseVec, SubspaceBasis};
use crate::scalar::Scalar;

use super::AlgebraError;

/// A connected cochain DG algebra known in degrees `0..=top`.
///
/// `products[n][m]` holds the product of basis elements `i` of degree `n`
/// and `j` of degree `m` at position `i * dim(m) + j`, for `n + m <= top`.
/// `diff[n]` is the differential `A^n -> A^{n+1}` for `n < top`.
#[derive(Clone, Debug)]
pub struct TruncatedDgAlgebra<S> {
    top: usize,
    names: Vec<Vec<String>>,
    products: Vec<Vec<Vec<SparseVec<S>>>>,
    diff: Vec<Matrix<S>>,
    zero_differential: bool,
    noetherian_asserted: bool,
    /// Degree and image of each presentation generator that fits under `top`.
    generators: Vec<Option<(usize, SparseVec<S>)>>,
}

pub type AlgebraRef<S> = Arc<TruncatedDgAlgebra<S>>;

impl<S: Scalar> TruncatedDgAlgebra<S> {
    /// Assembles an algebra from raw tables and checks every invariant.
    pub fn from_tables(
        top: usize,
        names: Vec<Vec<String>>,
        products: Vec<Vec<Vec<SparseVec<S>>>>,
        diff: Vec<Matrix<S>>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::from_tables_unchecked(top, names, products, diff);
        alg.verify()?;
        Ok(alg)
    }

    pub(crate) fn from_tables_unchecked(
        top: usize,
        names: Vec<Vec<String>>,
        products: Vec<Vec<Vec<SparseVec<S>>>>,
        diff: Vec<Matrix<S>>,
    ) -> Self {
        let zero_differential = diff.iter().all(Matrix::is_zero);
        TruncatedDgAlgebra {
            top,
            names,
            products,
            diff,
            zero_differential,
            noetherian_asserted: false,
            generators: Vec::new(),
        }
    }

    /// The ground field `k`, concentrated in degree 0.
    pub fn ground(top: usize) -> Self {
        let mut names = vec![vec!["1".to_string()]];
        names.resize(top + 1, Vec::new());
        let products = (0..=top)
            .map(|n| {
                (0..=top - n)
                    .map(|m| if n == 0 && m == 0 { vec![SparseVec::unit(0)] } else { Vec::new() })
                    .collect()
            })
            .collect();
        let diff = (0..top).map(|n| Matrix::zero(0, usize::from(n == 0))).collect();
        Self::from_tables_unchecked(top, names, products, diff)
    }

    pub fn with_noetherian_assertion(mut self, asserted: bool) -> Self {
        self.noetherian_asserted = asserted;
        self
    }

    pub fn noetherian_asserted(&self) -> bool {
        self.noetherian_asserted
    }

    pub(crate) fn with_generators(mut self, generators: Vec<Option<(usize, SparseVec<S>)>>) -> Self {
        self.generators = generators;
        self
    }

    /// Evaluates a word in the presentation generators. `None` when a letter
    /// is unknown or the word's degree exceeds the truncation.
    pub fn evaluate_word(&self, word: &[usize]) -> Option<(usize, SparseVec<S>)> {
        let mut acc = (0, SparseVec::unit(0));
        for &g in word {
            let (d, v) = self.generators.get(g)?.as_ref()?;
            if acc.0 + d > self.top {
                return None;
            }
            acc = (acc.0 + d, self.mul(acc.0, &acc.1, *d, v));
        }
        Some(acc)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn dim(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|n| self.dim(n)).collect()
    }

    pub fn name(&self, n: usize, i: usize) -> &str {
        &self.names[n][i]
    }

    pub fn names(&self, n: usize) -> &[String] {
        &self.names[n]
    }

    pub fn is_zero_differential(&self) -> bool {
        self.zero_differential
    }

    /// Product of basis elements; `n + m` must not exceed `top`.
    pub fn basis_product(&self, n: usize, i: usize, m: usize, j: usize) -> &SparseVec<S> {
        &self.products[n][m][i * self.dim(m) + j]
    }

    /// Product of homogeneous elements of degrees `n` and `m`.
    pub fn mul(&self, n: usize, a: &SparseVec<S>, m: usize, b: &SparseVec<S>) -> SparseVec<S> {
        assert!(n + m <= self.top, "product leaves the truncation window");
        let mut out = SparseVec::zero();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                out.add_scaled(self.basis_product(n, i, m, j), &(ca.clone() * cb.clone()));
            }
        }
        out
    }

    pub fn diff_matrix(&self, n: usize) -> &Matrix<S> {
        &self.diff[n]
    }

    /// `∂a` for `a` of degree `n < top`.
    pub fn d(&self, n: usize, a: &SparseVec<S>) -> SparseVec<S> {
        self.diff[n].mul_vec(a)
    }

    /// Basis of the maximal DG ideal in degree `n`.
    pub fn augmentation_ideal_slice(&self, n: usize) -> SubspaceBasis<S> {
        if n == 0 {
            SubspaceBasis::zero(self.dim(0))
        } else {
            SubspaceBasis::full(self.dim(n))
        }
    }

    /// Coefficient of the unit in a degree-0 element.
    pub fn augmentation(&self, a: &SparseVec<S>) -> S {
        a.get(0)
    }

    /// Checks connectedness, unit laws, `∂² = 0`, the Leibniz rule and
    /// associativity on every basis tuple inside the window.
    pub fn verify(&self) -> Result<(), AlgebraError> {
        let bad = |what: String| Err(AlgebraError::InvariantViolation(what));
        if self.dim(0) != 1 {
            return Err(AlgebraError::NotConnected { generator: String::new() });
        }
        let unit = SparseVec::<S>::unit(0);
        for n in 0..=self.top {
            for i in 0..self.dim(n) {
                let e = SparseVec::unit(i);
                if self.mul(0, &unit, n, &e) != e || self.mul(n, &e, 0, &unit) != e {
                    return bad(format!("unit law fails on {}", self.names[n][i]));
                }
            }
        }
        if !self.diff.is_empty() && !self.diff[0].is_zero() {
            return bad("differential of the unit is nonzero".into());
        }
        for n in 0..self.top.saturating_sub(1) {
            if !self.diff[n + 1].compose(&self.diff[n]).is_zero() {
                return bad(format!("∂² ≠ 0 in degree {n}"));
            }
        }
        for n in 1..self.top {
            for m in 1..self.top - n {
                for i in 0..self.dim(n) {
                    let a = SparseVec::unit(i);
                    let da = self.d(n, &a);
                    for j in 0..self.dim(m) {
                        let b = SparseVec::unit(j);
                        let lhs = self.d(n + m, self.basis_product(n, i, m, j));
                        let mut rhs = self.mul(n + 1, &da, m, &b);
                        rhs.add_scaled(&self.mul(n, &a, m + 1, &self.d(m, &b)), &S::sign(n as i64));
                        if lhs != rhs {
                            return bad(format!(
                                "Leibniz rule fails on ({}, {})",
                                self.names[n][i], self.names[m][j]
                            ));
                        }
                    }
                }
            }
        }
        for n in 1..=self.top {
            for m in 1..=self.top - n {
                for l in 1..=self.top - n - m {
                    for i in 0..self.dim(n) {
                        for j in 0..self.dim(m) {
                            let ab = self.basis_product(n, i, m, j);
                            for k in 0..self.dim(l) {
                                let c = SparseVec::unit(k);
                                let left = self.mul(n + m, ab, l, &c);
                                let right = self.mul(n, &SparseVec::unit(i), m + l, self.basis_product(m, j, l, k));
                                if left != right {
                                    return bad(format!(
                                        "associativity fails on ({}, {}, {})",
                                        self.names[n][i], self.names[m][j], self.names[l][k]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Same algebra with a smaller window.
    pub fn truncated(&self, top: usize) -> Self {
        assert!(top <= self.top);
        let products = (0..=top).map(|n| self.products[n][..=top - n].to_vec()).collect();
        TruncatedDgAlgebra {
            top,
            names: self.names[..=top].to_vec(),
            products,
            diff: self.diff[..top].to_vec(),
            zero_differential: self.diff[..top].iter().all(Matrix::is_zero),
            noetherian_asserted: self.noetherian_asserted,
            generators: self.generators.iter().map(|g| g.clone().filter(|(d, _)| *d <= top)).collect(),
        }
    }

    /// Human-readable rendering of an element of degree `n`.
    pub fn format_element(&self, n: usize, a: &SparseVec<S>) -> String {
        format_combination(a, |i| self.names[n][i].as_str())
    }
}

pub(crate) fn format_combination<'a, S: Scalar>(v: &SparseVec<S>, name: impl Fn(usize) -> &'a str) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(name(i));
    }
    out
}

/// Opposite algebra: `a ·op b = (-1)^{|a||b|} b a`, same differential.
pub fn opposite<S: Scalar>(a: &TruncatedDgAlgebra<S>) -> TruncatedDgAlgebra<S> {
    let top = a.top;
    let products = (0..=top)
        .map(|n| {
            (0..=top - n)
                .map(|m| {
                    let sign = S::sign((n * m) as i64);
                    let mut table = Vec::with_capacity(a.dim(n) * a.dim(m));
                    for i in 0..a.dim(n) {
                        for j in 0..a.dim(m) {
                            table.push(a.basis_product(m, j, n, i).scale(&sign));
                        }
                    }
                    table
                })
                .collect()
        })
        .collect();
    TruncatedDgAlgebra {
        top,
        names: a.names.clone(),
        products,
        diff: a.diff.clone(),
        zero_differential: a.zero_differential,
        noetherian_asserted: a.noetherian_asserted,
        generators: a.generators.clone(),
    }
}

/// Index bookkeeping for `A ⊗ B` with `A`, `B` sharing a window.
///
/// Degree `n` of the tensor product is ordered by the left degree `i`
/// (ascending), then the left basis index, then the right basis index.
#[derive(Clone, Debug)]
pub struct TensorIndex {
    left_dims: Vec<usize>,
    right_dims: Vec<usize>,
    offsets: Vec<Vec<usize>>,
}

impl TensorIndex {
    pub fn new(left_dims: Vec<usize>, right_dims: Vec<usize>, top: usize) -> Self {
        let offsets = (0..=top)
            .map(|n| {
                let mut acc = 0;
                let mut offs = Vec::with_capacity(n + 2);
                for i in 0..=n {
                    offs.push(acc);
                    acc += left_dims[i] * right_dims[n - i];
                }
                offs.push(acc);
                offs
            })
            .collect();
        TensorIndex { left_dims, right_dims, offsets }
    }

    pub fn dim(&self, n: usize) -> usize {
        *self.offsets[n].last().unwrap()
    }

    pub fn index(&self, i: usize, a: usize, j: usize, b: usize) -> usize {
        self.offsets[i + j][i] + a * self.right_dims[j] + b
    }

    /// `(left degree, left index, right degree, right index)`.
    pub fn split(&self, n: usize, idx: usize) -> (usize, usize, usize, usize) {
        let offs = &self.offsets[n];
        let i = offs.partition_point(|&o| o <= idx) - 1;
        let local = idx - offs[i];
        let rd = self.right_dims[n - i];
        (i, local / rd, n - i, local % rd)
    }

    pub fn left_dims(&self) -> &[usize] {
        &self.left_dims
    }
}

/// The enveloping algebra `A ⊗ A^op`.
///
/// `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} (a a') ⊗ (b ·op b')` and
/// `∂(a⊗b) = ∂a⊗b + (-1)^{|a|} a⊗∂b`.
pub fn enveloping<S: Scalar>(a: &TruncatedDgAlgebra<S>) -> TruncatedDgAlgebra<S> {
    let top = a.top;
    let op = opposite(a);
    let idx = TensorIndex::new(a.dims(), a.dims(), top);
    let mut names = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut ns = Vec::with_capacity(idx.dim(n));
        for i in 0..=n {
            for x in 0..a.dim(i) {
                for y in 0..a.dim(n - i) {
                    ns.push(format!("{}⊗{}", a.names[i][x], a.names[n - i][y]));
                }
            }
        }
        names.push(ns);
    }
    let mut products = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut row = Vec::with_capacity(top - n + 1);
        for m in 0..=top - n {
            let mut table = Vec::with_capacity(idx.dim(n) * idx.dim(m));
            for u in 0..idx.dim(n) {
                let (i, x, j, y) = idx.split(n, u);
                for v in 0..idx.dim(m) {
                    let (i2, x2, j2, y2) = idx.split(m, v);
                    let sign = S::sign((j * i2) as i64);
                    let left = a.basis_product(i, x, i2, x2);
                    let right = op.basis_product(j, y, j2, y2);
                    let mut pairs = Vec::with_capacity(left.nnz() * right.nnz());
                    for (p, c1) in left.iter() {
                        for (q, c2) in right.iter() {
                            pairs.push((idx.index(i + i2, p, j + j2, q), sign.clone() * c1.clone() * c2.clone()));
                        }
                    }
                    table.push(SparseVec::from_pairs(pairs));
                }
            }
            row.push(table);
        }
        products.push(row);
    }
    let mut diff = Vec::with_capacity(top);
    for n in 0..top {
        let mut cols = Vec::with_capacity(idx.dim(n));
        for u in 0..idx.dim(n) {
            let (i, x, j, y) = idx.split(n, u);
            let mut pairs = Vec::new();
            if i < top {
                for (p, c) in a.d(i, &SparseVec::unit(x)).iter() {
                    pairs.push((idx.index(i + 1, p, j, y), c.clone()));
                }
            }
            if j < top {
                let sign = S::sign(i as i64);
                for (q, c) in op.d(j, &SparseVec::unit(y)).iter() {
                    pairs.push((idx.index(i, x, j + 1, q), sign.clone() * c.clone()));
                }
            }
            cols.push(SparseVec::from_pairs(pairs));
        }
        diff.push(Matrix::from_columns(idx.dim(n + 1), cols));
    }
    let mut env = TruncatedDgAlgebra::from_tables_unchecked(top, names, products, diff);
    env.noetherian_asserted = a.noetherian_asserted;
    env
}

impl<S: Scalar> TruncatedDgAlgebra<S> {
    /// Whether the product tables of two algebras agree entry for entry.
    pub fn same_tables(&self, other: &Self) -> bool {
        self.top == other.top
            && self.dims() == other.dims()
            && self.products.iter().zip(&other.products).all(|(a, b)| a == b)
            && self.diff == other.diff
    }

    /// True when every product of positive-degree elements vanishes in the
    /// window and there is no differential, i.e. dims alone say `A ≅ k`.
    pub fn is_ground_field(&self) -> bool {
        (1..=self.top).all(|n| self.dim(n) == 0)
    }

}
