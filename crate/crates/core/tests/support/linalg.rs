//! Property checks for the exact linear algebra kernel, shared between the
//! property suite and the acceptance target.
//!
//! The oracle is a plain dense Gaussian elimination that shares no code with
//! the sparse echelon forms under test.

#![allow(dead_code)]

use dgha_core::exactla::{image_basis, kernel_basis, quotient, rank, solve, Matrix, SparseVec, SubspaceBasis};
use dgha_core::Scalar;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 1000;

pub fn dense_rank<S: Scalar>(mut rows: Vec<Vec<S>>) -> usize {
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n_cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().unwrap();
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone() * inv.clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= p.clone() * f.clone();
                }
            }
        }
        r += 1;
    }
    r
}

fn columns_rank<S: Scalar>(rows: usize, cols: &[SparseVec<S>]) -> usize {
    // transpose: each column becomes a row
    dense_rank(cols.iter().map(|c| c.to_dense(rows)).collect())
}

pub fn scalar<S: Scalar>() -> impl Strategy<Value = S> {
    // mostly zeros, small numerators, and denominators that matter over Q
    prop_oneof![
        3 => Just(S::zero()),
        4 => (-4i64..=4).prop_map(S::from_i64),
        1 => (-9i64..=9, 1i64..=5).prop_map(|(n, d)| S::from_ratio(n, d).unwrap_or_else(S::zero)),
    ]
}

pub fn matrix<S: Scalar>(max: usize) -> impl Strategy<Value = Matrix<S>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(scalar::<S>(), c), r).prop_map(|rows| Matrix::from_rows(&rows))
    })
}

pub fn vector<S: Scalar>(len: usize) -> impl Strategy<Value = SparseVec<S>> {
    prop::collection::vec(scalar::<S>(), len).prop_map(|v| SparseVec::from_dense(&v))
}

/// `rank + dim ker = #columns`, kernel vectors are independent and killed,
/// the image has the oracle's rank and lies in the column space.
pub fn rank_nullity<S: Scalar>(m: &Matrix<S>) -> Result<(), TestCaseError> {
    let oracle = dense_rank(m.to_dense());
    prop_assert_eq!(rank(m), oracle);
    prop_assert_eq!(rank(&m.transpose()), oracle);
    let ker = kernel_basis(m);
    prop_assert_eq!(ker.dim() + oracle, m.cols());
    prop_assert_eq!(columns_rank(m.cols(), &ker.vectors), ker.dim());
    for v in &ker.vectors {
        prop_assert!(m.mul_vec(v).is_zero());
    }
    let im = image_basis(m);
    prop_assert_eq!(im.dim(), oracle);
    prop_assert_eq!(columns_rank(m.rows(), &im.vectors), oracle);
    let mut with_image = m.columns().to_vec();
    with_image.extend(im.vectors.iter().cloned());
    prop_assert_eq!(columns_rank(m.rows(), &with_image), oracle);
    Ok(())
}

/// Right-hand sides in the image are solved exactly; a random right-hand
/// side is solvable exactly when it does not raise the rank.
pub fn solve_membership<S: Scalar>(m: &Matrix<S>, x: &SparseVec<S>, b: &SparseVec<S>) -> Result<(), TestCaseError> {
    let in_image = m.mul_vec(x);
    let y = solve(m, &in_image);
    prop_assert!(y.is_some());
    prop_assert_eq!(m.mul_vec(&y.unwrap()), in_image);

    let mut augmented = m.columns().to_vec();
    augmented.push(b.clone());
    let solvable = columns_rank(m.rows(), &augmented) == dense_rank(m.to_dense());
    match solve(m, b) {
        Some(y) => {
            prop_assert!(solvable);
            prop_assert_eq!(&m.mul_vec(&y), b);
        }
        None => prop_assert!(!solvable),
    }
    Ok(())
}

/// `V` spanned by the columns of `m`, `W` spanned by `m * mix`: the quotient
/// has dimension `dim V - dim W`, classifies `W` to zero, and lifting a class
/// lands back in the same coset.
pub fn quotient_dimensions<S: Scalar>(m: &Matrix<S>, mix: &Matrix<S>, probe: &SparseVec<S>) -> Result<(), TestCaseError> {
    let n = m.rows();
    let v = SubspaceBasis::spanned_by(n, m.columns().iter().cloned());
    let w_gens: Vec<SparseVec<S>> = mix.columns().iter().map(|c| m.mul_vec(c)).collect();
    let w = SubspaceBasis::spanned_by(n, w_gens.iter().cloned());
    let dim_v = columns_rank(n, m.columns());
    let dim_w = columns_rank(n, &w_gens);
    prop_assert_eq!(v.dim(), dim_v);
    prop_assert_eq!(w.dim(), dim_w);
    let q = quotient(&v, &w).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(q.dim(), dim_v - dim_w);
    prop_assert_eq!(q.sub_rank(), dim_w);
    for x in &w_gens {
        prop_assert!(q.in_sub(x));
        prop_assert!(q.classify(x).unwrap().is_zero());
    }
    // a vector of V
    let x = m.mul_vec(probe);
    let class = q.classify(&x).unwrap();
    let back = q.lift(&class);
    prop_assert!(q.in_sub(&x.sub(&back)));
    // the representatives stay independent modulo W
    let mut all = w.vectors.clone();
    all.extend(q.representatives().iter().cloned());
    prop_assert_eq!(columns_rank(n, &all), dim_v);
    Ok(())
}

pub fn rank_nullity_case<S: Scalar>() -> impl Strategy<Value = Matrix<S>> {
    matrix::<S>(7)
}

pub fn solve_case<S: Scalar>() -> impl Strategy<Value = (Matrix<S>, SparseVec<S>, SparseVec<S>)> {
    matrix::<S>(6).prop_flat_map(|m| {
        let (r, c) = (m.rows(), m.cols());
        (Just(m), vector::<S>(c), vector::<S>(r))
    })
}

pub fn quotient_case<S: Scalar>() -> impl Strategy<Value = (Matrix<S>, Matrix<S>, SparseVec<S>)> {
    matrix::<S>(6).prop_flat_map(|m| {
        let c = m.cols();
        let mix = (0..=c).prop_flat_map(move |k| {
            prop::collection::vec(prop::collection::vec(scalar::<S>(), k), c).prop_map(move |rows| {
                if k == 0 {
                    Matrix::zero(c, 0)
                } else {
                    Matrix::from_rows(&rows)
                }
            })
        });
        (Just(m), mix, vector::<S>(c))
    })
}
