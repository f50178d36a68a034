use std::sync::Arc;

use crate::exactla::SparseVec;
use crate::gralg::{AlgebraRef, TruncatedDgAlgebra};
use crate::scalar::Scalar;

use super::ModuleError;

/// An element `Σ_j c_j e_j` of a semi-free module, `c_j ∈ A`.
///
/// Terms are sorted by generator index and carry no zero coefficients. The
/// degree is not stored: an element of degree `n` has its coefficient on
/// `e_j` in `A^{n - |e_j|}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement<S> {
    terms: Vec<(usize, SparseVec<S>)>,
}

impl<S: Scalar> Default for FreeElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FreeElement<S> {
    pub fn zero() -> Self {
        FreeElement { terms: Vec::new() }
    }

    pub fn term(generator: usize, coeff: SparseVec<S>) -> Self {
        Self::from_terms(vec![(generator, coeff)])
    }

    /// Sums repeated generators and drops zero coefficients.
    pub fn from_terms(mut terms: Vec<(usize, SparseVec<S>)>) -> Self {
        terms.sort_by_key(|(g, _)| *g);
        let mut out: Vec<(usize, SparseVec<S>)> = Vec::with_capacity(terms.len());
        for (g, c) in terms {
            match out.last_mut() {
                Some((h, d)) if *h == g => d.add_scaled(&c, &S::one()),
                _ => out.push((g, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        FreeElement { terms: out }
    }

    pub fn terms(&self) -> &[(usize, SparseVec<S>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, generator: usize) -> Option<&SparseVec<S>> {
        self.terms.binary_search_by_key(&generator, |(g, _)| *g).ok().map(|k| &self.terms[k].1)
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|(g, _)| *g)
    }

    pub fn add_scaled(&mut self, other: &FreeElement<S>, c: &S) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut terms = std::mem::take(&mut self.terms);
        terms.extend(other.terms.iter().map(|(g, v)| (*g, v.scale(c))));
        *self = Self::from_terms(terms);
    }

    pub fn add(&self, other: &FreeElement<S>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, v)| (*g, v.scale(c))).collect())
    }

    /// Renames generators through `map` (old index to new index).
    pub fn reindexed(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, v)| (map(*g), v.clone())).collect())
    }

    /// Keeps only the terms on generators accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(usize) -> bool) -> Self {
        FreeElement { terms: self.terms.iter().filter(|(g, _)| keep(*g)).cloned().collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator<S> {
    pub name: String,
    pub degree: i32,
    pub stage: usize,
    pub d: FreeElement<S>,
}

/// A semi-free DG module `⊕ A·e_i` with a triangular differential: `∂e_i`
/// only involves generators listed before `e_i`.
#[derive(Clone, Debug)]
pub struct SemiFreeDgModule<S> {
    algebra: AlgebraRef<S>,
    gens: Vec<Generator<S>>,
}

impl<S: Scalar> SemiFreeDgModule<S> {
    pub fn new(algebra: AlgebraRef<S>) -> Self {
        SemiFreeDgModule { algebra, gens: Vec::new() }
    }

    /// `A` itself: one generator of degree 0 with zero differential.
    pub fn free_rank_one(algebra: AlgebraRef<S>) -> Self {
        let mut f = Self::new(algebra);
        f.push("e", 0, FreeElement::zero()).expect("no differential to check");
        f
    }

    pub fn algebra(&self) -> &TruncatedDgAlgebra<S> {
        &self.algebra
    }

    pub fn algebra_ref(&self) -> AlgebraRef<S> {
        self.algebra.clone()
    }

    pub fn gens(&self) -> &[Generator<S>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.gens[i].degree
    }

    /// Lowest generator degree (0 for the zero module).
    pub fn low(&self) -> i32 {
        self.gens.iter().map(|g| g.degree).min().unwrap_or(0)
    }

    /// Highest degree in which every generator's contribution is known.
    pub fn top(&self) -> i32 {
        self.algebra.top() as i32 + self.low()
    }

    /// Appends a generator, assigning it the greedy stage
    /// `1 + max stage` of the generators in its differential (0 if `∂e = 0`).
    pub fn push(&mut self, name: impl Into<String>, degree: i32, d: FreeElement<S>) -> Result<usize, ModuleError> {
        let stage = d.generators().map(|j| self.gens.get(j).map_or(0, |g| g.stage) + 1).max().unwrap_or(0);
        self.push_with_stage(name, degree, stage, d)
    }

    pub fn push_with_stage(
        &mut self,
        name: impl Into<String>,
        degree: i32,
        stage: usize,
        d: FreeElement<S>,
    ) -> Result<usize, ModuleError> {
        let name = name.into();
        let index = self.gens.len();
        for (j, c) in d.terms() {
            if *j >= index {
                return Err(ModuleError::NotTriangular { generator: name });
            }
            let q = degree + 1 - self.gens[*j].degree;
            if q < 0 || q as usize > self.algebra.top() || c.max_index().is_some_and(|m| m >= self.algebra.dim(q as usize)) {
                return Err(ModuleError::InvariantViolation(format!(
                    "coefficient of {} in ∂{name} does not fit degree {q}",
                    self.gens[*j].name
                )));
            }
            if self.gens[*j].stage >= stage {
                return Err(ModuleError::StageInconsistent { generator: name });
            }
        }
        self.gens.push(Generator { name, degree, stage, d });
        Ok(index)
    }

    /// True iff every differential coefficient lies in the augmentation
    /// ideal, i.e. no coefficient sits in degree 0.
    pub fn is_minimal(&self) -> bool {
        self.unit_coefficients().is_empty()
    }

    /// Pairs `(i, j)` where `∂e_i` has a nonzero degree-0 coefficient on `e_j`.
    pub fn unit_coefficients(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            for (j, _) in g.d.terms() {
                if self.gens[*j].degree == g.degree + 1 {
                    out.push((i, *j));
                }
            }
        }
        out
    }

    pub fn has_zero_differential(&self) -> bool {
        self.gens.iter().all(|g| g.d.is_zero())
    }

    /// Stage of each generator; the filtration `F(i) = A·{e : stage ≤ i}`.
    pub fn stages(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.stage).collect()
    }

    pub fn max_stage(&self) -> Option<usize> {
        self.gens.iter().map(|g| g.stage).max()
    }

    /// `a · x` for `a ∈ A^p` and `x` of degree `n`.
    pub fn mul_left(&self, p: usize, a: &SparseVec<S>, n: i32, x: &FreeElement<S>) -> FreeElement<S> {
        let terms = x
            .terms()
            .iter()
            .map(|(j, c)| (*j, self.algebra.mul(p, a, (n - self.gens[*j].degree) as usize, c)))
            .collect();
        FreeElement::from_terms(terms)
    }

    /// `∂x` for `x` of degree `n`; requires `n + 1 <= top()`.
    pub fn apply_d(&self, n: i32, x: &FreeElement<S>) -> FreeElement<S> {
        let top = self.algebra.top();
        let mut terms: Vec<(usize, SparseVec<S>)> = Vec::new();
        for (j, c) in x.terms() {
            let q = (n - self.gens[*j].degree) as usize;
            if q < top {
                terms.push((*j, self.algebra.d(q, c)));
            }
            let sign = S::sign(q as i64);
            for (k, ck) in self.gens[*j].d.terms() {
                let qk = (self.gens[*j].degree + 1 - self.gens[*k].degree) as usize;
                terms.push((*k, self.algebra.mul(q, c, qk, ck).scale(&sign)));
            }
        }
        FreeElement::from_terms(terms)
    }

    /// Checks triangularity, stage consistency and `∂² = 0` wherever the
    /// result lies inside the window.
    pub fn verify(&self) -> Result<(), ModuleError> {
        for (i, g) in self.gens.iter().enumerate() {
            for (j, _) in g.d.terms() {
                if *j >= i {
                    return Err(ModuleError::NotTriangular { generator: g.name.clone() });
                }
                if self.gens[*j].stage >= g.stage {
                    return Err(ModuleError::StageInconsistent { generator: g.name.clone() });
                }
            }
            if g.degree + 2 <= self.top() && !self.apply_d(g.degree + 1, &g.d).is_zero() {
                return Err(ModuleError::InvariantViolation(format!("∂² ≠ 0 on {}", g.name)));
            }
        }
        Ok(())
    }

    /// `Σ^i F`: generators `Σ^i e` of degree `|e| - i` with
    /// `∂(Σ^i e) = (-1)^i Σ_j (-1)^{|c_j| i} c_j Σ^i e_j`.
    pub fn suspension(&self, i: i32) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let terms = g
                    .d
                    .terms()
                    .iter()
                    .map(|(j, c)| {
                        let q = g.degree + 1 - self.gens[*j].degree;
                        (*j, c.scale(&S::sign((i + q * i) as i64)))
                    })
                    .collect();
                Generator {
                    name: suspended_name(&g.name, i),
                    degree: g.degree - i,
                    stage: g.stage,
                    d: FreeElement::from_terms(terms),
                }
            })
            .collect();
        SemiFreeDgModule { algebra: self.algebra.clone(), gens }
    }

    /// `F ⊕ G` with the generators of `G` listed after those of `F`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.gens.len();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| Generator { d: g.d.reindexed(|j| j + shift), ..g.clone() }));
        SemiFreeDgModule { algebra: self.algebra.clone(), gens }
    }

    /// Attaches new generators `e_v` of degree `|z_v| - 1` with `∂e_v = z_v`,
    /// where each `z_v` is a cocycle of `self` of the stated degree.
    pub fn cone(&self, cells: Vec<(String, i32, FreeElement<S>)>) -> Result<Self, ModuleError> {
        let mut out = self.clone();
        for (name, z_degree, z) in cells {
            if z_degree < out.top() && !out.apply_d(z_degree, &z).is_zero() {
                return Err(ModuleError::InvariantViolation(format!("attaching map of {name} is not a cocycle")));
            }
            out.push(name, z_degree - 1, z)?;
        }
        Ok(out)
    }

    /// Mapping cone of `f: G -> self`, given by the images of the
    /// generators of `G`: generators of `self`, then `Σg` of degree `|g| - 1`
    /// with `∂(Σg) = f(g) - Σ(∂g)` and `Σ(c e) = (-1)^{|c|} c Σe`.
    pub fn mapping_cone(&self, source: &Self, images: &[FreeElement<S>]) -> Result<Self, ModuleError> {
        assert_eq!(images.len(), source.len(), "one image per source generator");
        let shift = self.gens.len();
        let mut out = self.clone();
        for (g, img) in source.gens.iter().zip(images) {
            let mut d = img.clone();
            let terms = g
                .d
                .terms()
                .iter()
                .map(|(j, c)| {
                    let q = g.degree + 1 - source.gens[*j].degree;
                    (j + shift, c.scale(&S::sign(q as i64 + 1)))
                })
                .collect();
            d.add_scaled(&FreeElement::from_terms(terms), &S::one());
            out.push(suspended_name(&g.name, 1), g.degree - 1, d)?;
        }
        Ok(out)
    }

    /// Generators that must go when `removed` goes: everything whose
    /// differential involves a removed generator, transitively.
    pub fn upward_closure(&self, removed: usize) -> Vec<bool> {
        let mut gone = vec![false; self.gens.len()];
        gone[removed] = true;
        for i in removed + 1..self.gens.len() {
            if self.gens[i].d.generators().any(|j| gone[j]) {
                gone[i] = true;
            }
        }
        gone
    }

    /// The semi-free submodule on the generators not marked in `gone`
    /// (which must be upward closed), with the surviving old indices.
    pub fn restricted(&self, gone: &[bool]) -> (Self, Vec<usize>) {
        let kept: Vec<usize> = (0..self.gens.len()).filter(|&i| !gone[i]).collect();
        let mut new_index = vec![usize::MAX; self.gens.len()];
        for (n, &o) in kept.iter().enumerate() {
            new_index[o] = n;
        }
        let gens = kept
            .iter()
            .map(|&o| {
                let g = &self.gens[o];
                Generator { d: g.d.reindexed(|j| new_index[j]), ..g.clone() }
            })
            .collect();
        (SemiFreeDgModule { algebra: self.algebra.clone(), gens }, kept)
    }

    /// Same generators over a replacement algebra with identical tables,
    /// e.g. after re-truncating.
    pub fn with_algebra(&self, algebra: Arc<TruncatedDgAlgebra<S>>) -> Self {
        SemiFreeDgModule { algebra, gens: self.gens.clone() }
    }

    /// Human-readable `∂e_i`.
    pub fn format_d(&self, i: usize) -> String {
        format_free(self, self.gens[i].degree + 1, &self.gens[i].d)
    }
}

pub(crate) fn suspended_name(name: &str, i: i32) -> String {
    match i {
        0 => name.to_string(),
        1 => format!("Σ{name}"),
        _ => format!("Σ^{i}{name}"),
    }
}

/// Renders `Σ c_j e_j`, e.g. `y*e1 + x*e0`.
pub fn format_free<S: Scalar>(f: &SemiFreeDgModule<S>, n: i32, x: &FreeElement<S>) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (j, c) in x.terms() {
        let q = (n - f.gens[*j].degree) as usize;
        let coeff = f.algebra.format_element(q, c);
        let name = &f.gens[*j].name;
        if coeff == "1" {
            parts.push(name.clone());
        } else if coeff == "-1" {
            parts.push(format!("-{name}"));
        } else if c.nnz() == 1 {
            parts.push(format!("{coeff}*{name}"));
        } else {
            parts.push(format!("({coeff})*{name}"));
        }
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}
