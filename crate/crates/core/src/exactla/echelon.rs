
use crate::scalar::Scalar;

use super::SparseVec;

const NO_PIVOT: u32 = u32::MAX;

/// Incremental column echelon form.
///
/// Vectors are inserted one at a time and reduced against the pivots found
/// so far, always eliminating the smallest nonzero index first. Pivots are
/// stored normalized (leading coefficient one). With tracking enabled each
/// pivot also remembers its expression in terms of the inserted vectors,
/// which is what kernels and solutions are read from.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    ambient: usize,
    slot_of_index: Vec<u32>,
    pivots: Vec<SparseVec<S>>,
    combos: Option<Vec<SparseVec<S>>>,
    inserted: usize,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug)]
pub enum Insertion<S> {
    /// The vector was independent and became pivot number `slot`.
    Pivot(usize),
    /// The vector was dependent; with tracking on, the combination of
    /// inserted vectors that vanishes (including the new one).
    Dependent(Option<SparseVec<S>>),
}

impl<S: Scalar> Echelon<S> {
    pub fn new(ambient: usize, track: bool) -> Self {
        Echelon {
            ambient,
            slot_of_index: vec![NO_PIVOT; ambient],
            pivots: Vec::new(),
            combos: track.then(Vec::new),
            inserted: 0,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> &[SparseVec<S>] {
        &self.pivots
    }

    /// Reduces `v` in place. Returns the pivot coefficients used, so that
    /// `original = residual + sum(coeff * pivot)`.
    fn reduce_with(&self, v: &mut SparseVec<S>, mut used: Option<&mut Vec<(usize, S)>>) {
        while let Some((idx, c)) = v.leading() {
            let slot = self.slot_of_index[idx];
            if slot == NO_PIVOT {
                break;
            }
            let c = c.clone();
            v.add_scaled(&self.pivots[slot as usize], &-c.clone());
            if let Some(u) = used.as_deref_mut() {
                u.push((slot as usize, c));
            }
        }
    }

    /// Residual of `v` after reduction; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut w = v.clone();
        self.reduce_with(&mut w, None);
        w
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Expresses `v` as a combination of the inserted vectors, or `None`
    /// when `v` is outside their span. Requires tracking.
    pub fn express(&self, v: &SparseVec<S>) -> Option<SparseVec<S>> {
        let combos = self.combos.as_ref().expect("express requires a tracking echelon");
        let mut w = v.clone();
        let mut used = Vec::new();
        self.reduce_with(&mut w, Some(&mut used));
        if !w.is_zero() {
            return None;
        }
        let mut out = SparseVec::zero();
        for (slot, c) in used {
            out.add_scaled(&combos[slot], &c);
        }
        Some(out)
    }

    pub fn insert(&mut self, v: SparseVec<S>) -> Insertion<S> {
        assert!(v.max_index().is_none_or(|m| m < self.ambient), "vector exceeds ambient dimension");
        let me = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let mut combo = self.combos.as_ref().map(|_| SparseVec::unit(me));
        while let Some((idx, c)) = v.leading() {
            let slot = self.slot_of_index[idx];
            if slot == NO_PIVOT {
                break;
            }
            let neg = -c.clone();
            v.add_scaled(&self.pivots[slot as usize], &neg);
            if let (Some(cb), Some(all)) = (combo.as_mut(), self.combos.as_ref()) {
                cb.add_scaled(&all[slot as usize], &neg);
            }
        }
        match v.leading() {
            None => Insertion::Dependent(combo),
            Some((idx, lead)) => {
                let inv = lead.inverse().expect("nonzero pivot");
                let v = if inv.is_one() { v } else { v.scale(&inv) };
                let slot = self.pivots.len();
                self.slot_of_index[idx] = slot as u32;
                self.pivots.push(v);
                if let (Some(cb), Some(all)) = (combo, self.combos.as_mut()) {
                    all.push(if inv.is_one() { cb } else { cb.scale(&inv) });
                }
                Insertion::Pivot(slot)
            }
        }
    }

    /// Fully reduced copy of the pivots: every pivot index appears in
    /// exactly one basis vector.
    pub fn reduced_basis(&self) -> Vec<SparseVec<S>> {
        let mut order: Vec<usize> = (0..self.pivots.len()).collect();
        order.sort_by_key(|&s| self.pivots[s].leading().map(|(i, _)| i));
        // Back-substitute from the last pivot index down.
        let mut done: Vec<SparseVec<S>> = Vec::new();
        for &s in order.iter().rev() {
            let mut v = self.pivots[s].clone();
            for d in &done {
                let (idx, _) = d.leading().unwrap();
                let c = v.get(idx);
                if !c.is_zero() {
                    v.add_scaled(d, &-c);
                }
            }
            done.push(v);
        }
        done.reverse();
        done
    }
}
