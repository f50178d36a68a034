use crate::exactla::{Matrix, SparseVec};
use crate::gralg::{format_combination, AlgebraRef, CohomologyAlgebra, TruncatedDgAlgebra};
use crate::scalar::Scalar;

use super::explicit::ExplicitDgModule;
use super::morphism::module_cohomology;
use super::ModuleError;

/// A graded module over a connected graded algebra `R` (zero differential),
/// known on degrees `low..=top`, with the action stored as tables.
///
/// `ring_certified` is the top degree in which `R` itself is reliable.
#[derive(Clone, Debug)]
pub struct GradedModule<S> {
    algebra: AlgebraRef<S>,
    ring_certified: usize,
    low: i32,
    names: Vec<Vec<String>>,
    /// `action[n - low][p][a * dim(n) + i]` = `a·m_i` in degree `n + p`.
    action: Vec<Vec<Vec<SparseVec<S>>>>,
}

impl<S: Scalar> GradedModule<S> {
    /// Builds a module from an action callback and checks unit and
    /// associativity laws.
    pub fn from_fn(
        algebra: AlgebraRef<S>,
        ring_certified: usize,
        low: i32,
        names: Vec<Vec<String>>,
        act: impl Fn(usize, usize, i32, usize) -> SparseVec<S>,
    ) -> Result<Self, ModuleError> {
        let top = low + names.len() as i32 - 1;
        let mut action = Vec::with_capacity(names.len());
        for (k, basis) in names.iter().enumerate() {
            let n = low + k as i32;
            let max_p = algebra.top().min((top - n) as usize);
            let mut per_p = Vec::with_capacity(max_p + 1);
            for p in 0..=max_p {
                let mut table = Vec::with_capacity(algebra.dim(p) * basis.len());
                for a in 0..algebra.dim(p) {
                    for i in 0..basis.len() {
                        table.push(act(p, a, n, i));
                    }
                }
                per_p.push(table);
            }
            action.push(per_p);
        }
        let m = GradedModule { algebra, ring_certified, low, names, action };
        m.verify()?;
        Ok(m)
    }

    /// `k` in degree 0, known up to `top`.
    pub fn trivial(algebra: AlgebraRef<S>, ring_certified: usize, top: i32) -> Self {
        let mut names = vec![vec!["1".to_string()]];
        names.resize((top + 1).max(1) as usize, Vec::new());
        Self::from_fn(algebra, ring_certified, 0, names, |p, _, _, i| {
            if p == 0 {
                SparseVec::unit(i)
            } else {
                SparseVec::zero()
            }
        })
        .expect("the trivial module satisfies the module axioms")
    }

    /// `⊕_g R(-t_g)`, known as far as the ring allows.
    pub fn free(algebra: AlgebraRef<S>, ring_certified: usize, degrees: &[i32]) -> Self {
        let low = degrees.iter().copied().min().unwrap_or(0);
        let top = low + ring_certified as i32;
        let alg = algebra.clone();
        let blocks = |n: i32| -> Vec<(usize, usize, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            for (g, &t) in degrees.iter().enumerate() {
                let q = n - t;
                if q >= 0 && q as usize <= alg.top() {
                    out.push((g, off, q as usize));
                    off += alg.dim(q as usize);
                }
            }
            out
        };
        let names = (low..=top)
            .map(|n| {
                blocks(n)
                    .iter()
                    .flat_map(|&(g, _, q)| (0..alg.dim(q)).map(move |a| (g, q, a)))
                    .map(|(g, q, a)| if q == 0 { format!("w{g}") } else { format!("{}·w{g}", alg.name(q, a)) })
                    .collect()
            })
            .collect();
        Self::from_fn(algebra, ring_certified, low, names, |p, a, n, i| {
            let bl = blocks(n);
            let k = bl.partition_point(|&(_, off, _)| off <= i) - 1;
            let (g, off, q) = bl[k];
            let prod = alg.basis_product(p, a, q, i - off);
            let target = blocks(n + p as i32);
            let (_, toff, _) = *target.iter().find(|(h, _, _)| *h == g).expect("block present");
            prod.shifted(toff)
        })
        .expect("free modules satisfy the module axioms")
    }

    pub fn algebra(&self) -> &TruncatedDgAlgebra<S> {
        &self.algebra
    }

    pub fn algebra_ref(&self) -> AlgebraRef<S> {
        self.algebra.clone()
    }

    pub fn ring_certified(&self) -> usize {
        self.ring_certified
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn top(&self) -> i32 {
        self.low + self.names.len() as i32 - 1
    }

    pub fn dim(&self, n: i32) -> usize {
        let k = n - self.low;
        if k < 0 {
            return 0;
        }
        self.names.get(k as usize).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn name(&self, n: i32, i: usize) -> &str {
        &self.names[(n - self.low) as usize][i]
    }

    /// `a·m_i` for `a` basis element `a` of `R^p`, `m_i` basis of degree `n`.
    pub fn act_basis(&self, p: usize, a: usize, n: i32, i: usize) -> &SparseVec<S> {
        &self.action[(n - self.low) as usize][p][a * self.dim(n) + i]
    }

    pub fn act(&self, p: usize, a: &SparseVec<S>, n: i32, m: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::zero();
        if n < self.low || n + p as i32 > self.top() {
            assert!(n + p as i32 <= self.top() || m.is_zero(), "action leaves the window");
            return out;
        }
        for (x, ca) in a.iter() {
            for (i, cm) in m.iter() {
                out.add_scaled(self.act_basis(p, x, n, i), &(ca.clone() * cm.clone()));
            }
        }
        out
    }

    pub fn action_matrix(&self, p: usize, a: &SparseVec<S>, n: i32) -> Matrix<S> {
        let cols = (0..self.dim(n)).map(|i| self.act(p, a, n, &SparseVec::unit(i))).collect();
        Matrix::from_columns(self.dim(n + p as i32), cols)
    }

    /// Unit and associativity laws on basis triples inside the window.
    pub fn verify(&self) -> Result<(), ModuleError> {
        let r = &self.algebra;
        let top = self.top();
        for n in self.low..=top {
            for i in 0..self.dim(n) {
                if *self.act_basis(0, 0, n, i) != SparseVec::unit(i) {
                    return Err(ModuleError::InvariantViolation(format!("unit does not act as identity in degree {n}")));
                }
            }
            for p in 1..=r.top().min((top - n) as usize) {
                for q in 1..=r.top().min((top - n) as usize - p) {
                    for a in 0..r.dim(p) {
                        for b in 0..r.dim(q) {
                            for i in 0..self.dim(n) {
                                let bm = self.act_basis(q, b, n, i);
                                let lhs = self.act(p, &SparseVec::unit(a), n + q as i32, bm);
                                let rhs = self.act(p + q, r.basis_product(p, a, q, b), n, &SparseVec::unit(i));
                                if lhs != rhs {
                                    return Err(ModuleError::InvariantViolation(format!(
                                        "action is not associative in degree {n}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `H(M)` as a graded module over `H(A)`, on degrees where both the module
/// cohomology and the ring are certified.
pub fn cohomology_module<S: Scalar>(m: &ExplicitDgModule<S>, ha: &CohomologyAlgebra<S>) -> GradedModule<S> {
    let top = m.top() - 1;
    let classes: Vec<_> = (m.low()..=top).map(|n| module_cohomology(m, n)).collect();
    let names = classes
        .iter()
        .enumerate()
        .map(|(k, q)| {
            let n = m.low() + k as i32;
            let basis: Vec<String> = (0..m.dim(n)).map(|i| m.name(n, i)).collect();
            q.representatives()
                .iter()
                .map(|r| format!("[{}]", format_combination(r, |i| basis[i].as_str())))
                .collect()
        })
        .collect();
    let low = m.low();
    GradedModule::from_fn(ha.algebra_ref(), ha.certified_upto(), low, names, |p, a, n, i| {
        let z = &classes[(n - low) as usize].representatives()[i];
        let h = ha.rep(p, a);
        let prod = m.act(p, h, n, z);
        classes[(n + p as i32 - low) as usize].classify(&prod).expect("cocycle times cocycle is a cocycle")
    })
    .expect("the induced action satisfies the module axioms")
}

