use std::fmt;


use crate::scalar::Scalar;

/// A sparse coordinate vector: `(index, value)` pairs sorted by index with
/// no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseVec<S> {
    entries: Vec<(usize, S)>,
}

impl<S: Scalar> Default for SparseVec<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: fmt::Debug> fmt::Debug for SparseVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

impl<S: Scalar> SparseVec<S> {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, S::one())] }
    }

    pub fn single(i: usize, v: S) -> Self {
        if v.is_zero() {
            Self::zero()
        } else {
            SparseVec { entries: vec![(i, v)] }
        }
    }

    /// Builds from arbitrary pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, S)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, S)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(values: &[S]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<S> {
        let mut out = vec![S::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn leading(&self) -> Option<(usize, &S)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> S {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.clone() * c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v.clone())).collect() }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec<S>, c: &S) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        out.push(a.next().unwrap());
                    } else if j < i {
                        let (j, w) = b.next().unwrap();
                        out.push((*j, w.clone() * c.clone()));
                    } else {
                        let (i, v) = a.next().unwrap();
                        let (_, w) = b.next().unwrap();
                        let s = v + w.clone() * c.clone();
                        if !s.is_zero() {
                            out.push((i, s));
                        }
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, w.clone() * c.clone()));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec<S>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &SparseVec<S>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect() }
    }

    /// Keeps the entries with index in `lo..hi`, re-based to start at zero.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, v)| (i - lo, v.clone()))
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec<S>) -> S {
        let mut acc = S::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, j) = (self.entries[p].0, other.entries[q].0);
            if i < j {
                p += 1;
            } else if j < i {
                q += 1;
            } else {
                acc += self.entries[p].1.clone() * other.entries[q].1.clone();
                p += 1;
                q += 1;
            }
        }
        acc
    }

    /// Sum of `coeff * cols[index]` over the entries of `self`.
    pub fn combine(&self, cols: &[SparseVec<S>]) -> SparseVec<S> {
        let mut out = SparseVec::zero();
        for (i, c) in self.iter() {
            out.add_scaled(&cols[i], c);
        }
        out
    }
}

impl<S: Scalar> FromIterator<(usize, S)> for SparseVec<S> {
    fn from_iter<T: IntoIterator<Item = (usize, S)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter.into_iter().collect())
    }
}
