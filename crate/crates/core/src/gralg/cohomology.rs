use std::sync::Arc;

use crate::exactla::{cohomology_quotient, Matrix, Quotient, SparseVec};
use crate::scalar::Scalar;

use super::algebra::{format_combination, TruncatedDgAlgebra};

/// `H(A)` as a zero-differential algebra together with the chosen
/// cocycle representatives.
///
/// Degrees up to `top` are materialized, but only `0..=certified_upto`
/// (one less than the top) are reliable: the coboundaries landing in the
/// top degree come from a degree the truncation does not see past.
#[derive(Clone, Debug)]
pub struct CohomologyAlgebra<S> {
    h: Arc<TruncatedDgAlgebra<S>>,
    classes: Vec<Quotient<S>>,
    certified_upto: usize,
}

impl<S: Scalar> CohomologyAlgebra<S> {
    pub fn algebra(&self) -> &TruncatedDgAlgebra<S> {
        &self.h
    }

    pub fn algebra_ref(&self) -> Arc<TruncatedDgAlgebra<S>> {
        self.h.clone()
    }

    pub fn certified_upto(&self) -> usize {
        self.certified_upto
    }

    pub fn dim(&self, n: usize) -> usize {
        self.h.dim(n)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.h.dims()
    }

    /// Cocycle representing basis class `i` of `H^n`.
    pub fn rep(&self, n: usize, i: usize) -> &SparseVec<S> {
        &self.classes[n].representatives()[i]
    }

    /// `A^n x H^n` matrix of representatives.
    pub fn reps(&self, n: usize) -> Matrix<S> {
        Matrix::from_columns(self.classes[n].ambient(), self.classes[n].representatives().to_vec())
    }

    /// Lifts `H^n` coordinates to a cocycle.
    pub fn lift(&self, n: usize, coords: &SparseVec<S>) -> SparseVec<S> {
        self.classes[n].lift(coords)
    }

    /// `H^n` coordinates of a cocycle; `None` when `z` is not a cocycle.
    pub fn class_of(&self, n: usize, z: &SparseVec<S>) -> Option<SparseVec<S>> {
        self.classes[n].classify(z)
    }

    pub fn is_coboundary(&self, n: usize, z: &SparseVec<S>) -> bool {
        self.classes[n].in_sub(z)
    }
}

/// Computes `H(A)` with its induced product.
pub fn cohomology_algebra<S: Scalar>(a: &TruncatedDgAlgebra<S>) -> CohomologyAlgebra<S> {
    let top = a.top();
    let classes: Vec<Quotient<S>> = (0..=top)
        .map(|n| {
            let incoming = (n > 0).then(|| a.diff_matrix(n - 1));
            let outgoing = (n < top).then(|| a.diff_matrix(n));
            cohomology_quotient(a.dim(n), incoming, outgoing)
        })
        .collect();
    let names = (0..=top)
        .map(|n| {
            classes[n]
                .representatives()
                .iter()
                .map(|r| format!("[{}]", format_combination(r, |i| a.name(n, i))))
                .collect()
        })
        .collect();
    let products = (0..=top)
        .map(|n| {
            (0..=top - n)
                .map(|m| {
                    let mut table = Vec::with_capacity(classes[n].dim() * classes[m].dim());
                    for u in classes[n].representatives() {
                        for v in classes[m].representatives() {
                            let uv = a.mul(n, u, m, v);
                            table.push(classes[n + m].classify(&uv).expect("product of cocycles is a cocycle"));
                        }
                    }
                    table
                })
                .collect()
        })
        .collect();
    let diff = (0..top).map(|n| Matrix::zero(classes[n + 1].dim(), classes[n].dim())).collect();
    let h = TruncatedDgAlgebra::from_tables_unchecked(top, names, products, diff)
        .with_noetherian_assertion(a.noetherian_asserted());
    CohomologyAlgebra { h: Arc::new(h), classes, certified_upto: top.saturating_sub(1) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::{validate_and_truncate, AlgebraPresentation};
    use crate::scalar::Rational;

    type Q = Rational;

    fn example(top: usize) -> TruncatedDgAlgebra<Q> {
        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 1)]).with_differential("x", "y*y").unwrap();
        validate_and_truncate(&p, top).unwrap()
    }

    #[test]
    fn example_cohomology_is_one_dimensional_in_each_degree() {
        let h = cohomology_algebra(&example(10));
        assert_eq!(h.certified_upto(), 9);
        for n in 0..=9 {
            assert_eq!(h.dim(n), 1, "degree {n}");
        }
        assert_eq!(h.algebra().name(1, 0), "[y]");
        assert_eq!(h.algebra().name(2, 0), "[x*y + y*x]");
        assert!(h.algebra().basis_product(1, 0, 1, 0).is_zero());
        assert!(!h.algebra().basis_product(1, 0, 2, 0).is_zero());
        h.algebra().verify().unwrap();
    }

    #[test]
    fn zero_differential_cohomology_is_the_algebra() {
        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 2)]);
        let a = validate_and_truncate(&p, 5).unwrap();
        let h = cohomology_algebra(&a);
        assert_eq!(h.dims(), a.dims());
    }
}
