//! Exact linear algebra over the fields of [`crate::scalar`].
//!
//! Everything here is deterministic: elimination always pivots on the
//! smallest nonzero index, so reruns reproduce bases bit-for-bit.

mod echelon;
mod matrix;
mod vector;

pub use echelon::{Echelon, Insertion};
pub use matrix::Matrix;
pub use vector::SparseVec;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum LinAlgError {
    #[error("subspace is not contained in the ambient span (vector {index})")]
    WNotContained { index: usize },
}

/// A list of linearly independent vectors in `k^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis<S> {
    pub ambient_dim: usize,
    pub vectors: Vec<SparseVec<S>>,
}

impl<S: Scalar> SubspaceBasis<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, vectors: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, vectors: (0..ambient_dim).map(SparseVec::unit).collect() }
    }

    /// Keeps an independent subset of `vectors`, in order.
    pub fn spanned_by(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec<S>>) -> Self {
        let mut ech = Echelon::new(ambient_dim, false);
        let mut kept = Vec::new();
        for v in vectors {
            if let Insertion::Pivot(_) = ech.insert(v.clone()) {
                kept.push(v);
            }
        }
        SubspaceBasis { ambient_dim, vectors: kept }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        let mut ech = Echelon::new(self.ambient_dim, false);
        for b in &self.vectors {
            ech.insert(b.clone());
        }
        ech.contains(v)
    }

    pub fn as_matrix(&self) -> Matrix<S> {
        Matrix::from_columns(self.ambient_dim, self.vectors.clone())
    }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let mut ech = Echelon::new(m.rows(), false);
    for c in m.columns() {
        ech.insert(c.clone());
    }
    ech.rank()
}

/// Basis of `{v : m v = 0}`.
pub fn kernel_basis<S: Scalar>(m: &Matrix<S>) -> SubspaceBasis<S> {
    let mut ech = Echelon::new(m.rows(), true);
    let mut vectors = Vec::new();
    for c in m.columns() {
        if let Insertion::Dependent(Some(combo)) = ech.insert(c.clone()) {
            vectors.push(combo);
        }
    }
    SubspaceBasis { ambient_dim: m.cols(), vectors }
}

/// Basis of the column space, in echelon form.
pub fn image_basis<S: Scalar>(m: &Matrix<S>) -> SubspaceBasis<S> {
    let mut ech = Echelon::new(m.rows(), false);
    for c in m.columns() {
        ech.insert(c.clone());
    }
    SubspaceBasis { ambient_dim: m.rows(), vectors: ech.pivots().to_vec() }
}

/// Some `x` with `m x = b`, or `None` if the system is inconsistent.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &SparseVec<S>) -> Option<SparseVec<S>> {
    Solver::new(m).solve(b)
}

/// A factored matrix for repeated right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver<S> {
    echelon: Echelon<S>,
}

impl<S: Scalar> Solver<S> {
    pub fn new(m: &Matrix<S>) -> Self {
        let mut echelon = Echelon::new(m.rows(), true);
        for c in m.columns() {
            echelon.insert(c.clone());
        }
        Solver { echelon }
    }

    pub fn solve(&self, b: &SparseVec<S>) -> Option<SparseVec<S>> {
        self.echelon.express(b)
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }
}

/// `V / W` with a chosen section.
///
/// `representatives` complete a basis of `W` to a basis of `V`; they are
/// taken from `V`'s own basis vectors in order.
#[derive(Clone, Debug)]
pub struct Quotient<S> {
    echelon: Echelon<S>,
    /// Input position (within the combined insertion order) of each
    /// representative.
    rep_inputs: Vec<usize>,
    representatives: Vec<SparseVec<S>>,
    sub_inputs: usize,
}

impl<S: Scalar> Quotient<S> {
    /// Builds the quotient without checking `W ⊆ V`.
    pub fn new_unchecked(ambient: usize, v: &[SparseVec<S>], w: &[SparseVec<S>]) -> Self {
        let mut echelon = Echelon::new(ambient, true);
        for x in w {
            echelon.insert(x.clone());
        }
        let sub_inputs = w.len();
        let mut rep_inputs = Vec::new();
        let mut representatives = Vec::new();
        for x in v {
            let at = echelon.inserted();
            if let Insertion::Pivot(_) = echelon.insert(x.clone()) {
                rep_inputs.push(at);
                representatives.push(x.clone());
            }
        }
        Quotient { echelon, rep_inputs, representatives, sub_inputs }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient(&self) -> usize {
        self.echelon.ambient()
    }

    pub fn representatives(&self) -> &[SparseVec<S>] {
        &self.representatives
    }

    /// Rank of `W` (the part that is killed).
    pub fn sub_rank(&self) -> usize {
        self.echelon.rank() - self.representatives.len()
    }

    /// Quotient coordinates of an ambient vector of `V`; `None` if outside.
    pub fn classify(&self, x: &SparseVec<S>) -> Option<SparseVec<S>> {
        let combo = self.echelon.express(x)?;
        Some(
            self.rep_inputs
                .iter()
                .enumerate()
                .filter_map(|(q, &inp)| {
                    let c = combo.get(inp);
                    (!num_traits::Zero::is_zero(&c)).then_some((q, c))
                })
                .collect(),
        )
    }

    /// True when `x` lies in `W`.
    pub fn in_sub(&self, x: &SparseVec<S>) -> bool {
        match self.echelon.express(x) {
            None => false,
            Some(combo) => combo.iter().all(|(i, _)| i < self.sub_inputs),
        }
    }

    /// Matrix from `V`-coordinates to quotient coordinates.
    pub fn projection(&self, v: &SubspaceBasis<S>) -> Matrix<S> {
        let cols = v
            .vectors
            .iter()
            .map(|x| self.classify(x).expect("basis vector of V lies in V"))
            .collect();
        Matrix::from_columns(self.dim(), cols)
    }

    /// Ambient vector for given quotient coordinates.
    pub fn lift(&self, coords: &SparseVec<S>) -> SparseVec<S> {
        coords.combine(&self.representatives)
    }
}

/// Cohomology at a spot of a complex `incoming -> k^dim -> outgoing`:
/// cocycles modulo coboundaries, with representatives chosen among the
/// cocycle basis. A missing map counts as zero.
pub fn cohomology_quotient<S: Scalar>(
    dim: usize,
    incoming: Option<&Matrix<S>>,
    outgoing: Option<&Matrix<S>>,
) -> Quotient<S> {
    let cocycles = match outgoing {
        Some(m) => kernel_basis(m),
        None => SubspaceBasis::full(dim),
    };
    let boundaries = match incoming {
        Some(m) => image_basis(m),
        None => SubspaceBasis::zero(dim),
    };
    Quotient::new_unchecked(dim, &cocycles.vectors, &boundaries.vectors)
}

/// Completes `W` to a basis of `V`, returning the representatives together
/// with the projection from `V`-coordinates onto the quotient.
pub fn quotient_with_section<S: Scalar>(
    v: &SubspaceBasis<S>,
    w: &SubspaceBasis<S>,
) -> Result<(Vec<SparseVec<S>>, Matrix<S>), LinAlgError> {
    let q = quotient(v, w)?;
    let proj = q.projection(v);
    Ok((q.representatives.clone(), proj))
}

/// Checked construction of a [`Quotient`].
pub fn quotient<S: Scalar>(v: &SubspaceBasis<S>, w: &SubspaceBasis<S>) -> Result<Quotient<S>, LinAlgError> {
    assert_eq!(v.ambient_dim, w.ambient_dim, "ambient dimensions differ");
    let mut span_v = Echelon::new(v.ambient_dim, false);
    for x in &v.vectors {
        span_v.insert(x.clone());
    }
    if let Some(index) = w.vectors.iter().position(|x| !span_v.contains(x)) {
        return Err(LinAlgError::WNotContained { index });
    }
    Ok(Quotient::new_unchecked(v.ambient_dim, &v.vectors, &w.vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    type Q = Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&q(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&q(&[&[1, 1]])), 1);
        assert_eq!(rank(&Matrix::<Q>::zero(3, 3)), 0);
    }

    #[test]
    fn kernel_of_row_vector() {
        let k = kernel_basis(&q(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        let v = &k.vectors[0];
        assert_eq!(v.get(0), -v.get(1));
        assert!(!v.is_zero());
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let k = kernel_basis(&Matrix::<Q>::zero(3, 3));
        assert_eq!(k.dim(), 3);
    }

    #[test]
    fn image_cases() {
        assert_eq!(image_basis(&Matrix::<Q>::identity(3)).vectors, SubspaceBasis::<Q>::full(3).vectors);
        let im = image_basis(&q(&[&[1, 1], &[1, 1]]));
        assert_eq!(im.dim(), 1);
        assert_eq!(im.vectors[0], SparseVec::from_dense(&[Q::from_i64(1), Q::from_i64(1)]));
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::<Q>::identity(2);
        let b = SparseVec::from_dense(&[Q::from_i64(3), Q::from_i64(-2)]);
        assert_eq!(solve(&id, &b), Some(b.clone()));

        let m = q(&[&[1, 1]]);
        let x = solve(&m, &SparseVec::unit(0)).unwrap();
        assert_eq!(m.mul_vec(&x), SparseVec::unit(0));

        let inconsistent = q(&[&[1], &[1]]);
        assert_eq!(solve(&inconsistent, &SparseVec::unit(1)), None);
    }

    #[test]
    fn quotient_cases() {
        let v = SubspaceBasis::<Q>::full(2);
        let (reps, proj) = quotient_with_section(&v, &SubspaceBasis::zero(2)).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(proj, Matrix::identity(2));

        let w = SubspaceBasis { ambient_dim: 2, vectors: vec![SparseVec::unit(0)] };
        let (reps, proj) = quotient_with_section(&v, &w).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(proj.mul_vec(&SparseVec::unit(0)).is_zero());

        let line = SubspaceBasis { ambient_dim: 2, vectors: vec![SparseVec::unit(1)] };
        assert_eq!(quotient_with_section(&line, &w).unwrap_err(), LinAlgError::WNotContained { index: 0 });
    }

    #[test]
    fn prime_field_rank_differs_from_rationals() {
        let rows: &[&[i64]] = &[&[1, 1], &[1, 8]];
        assert_eq!(rank(&Matrix::<Q>::from_i64_rows(rows)), 2);
        assert_eq!(rank(&Matrix::<Fp<7>>::from_i64_rows(rows)), 1);
    }
}
