use std::fmt;

use crate::scalar::Scalar;

use super::SparseVec;

/// A `rows x cols` matrix stored as sparse columns.
///
/// Column `j` is the image of the `j`-th source basis vector, which is how
/// every linear map in the crate is produced.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<S>>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(&self.columns).finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, columns: vec![SparseVec::zero(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<S>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.max_index().is_none_or(|m| m < rows)));
        Matrix { rows, cols: columns.len(), columns }
    }

    /// Row-major dense constructor, mostly for tests.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                columns[c].push((r, v.clone()));
            }
        }
        Matrix {
            rows: nrows,
            cols: ncols,
            columns: columns.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<S>> = rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec<S> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<S>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.columns[c].get(r)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn mul_vec(&self, v: &SparseVec<S>) -> SparseVec<S> {
        v.combine(&self.columns)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in compose");
        Matrix {
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut rows = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter() {
                rows[r].push((c, v.clone()));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            columns: rows.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, columns: self.columns.iter().map(|v| v.scale(c)).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }
}
