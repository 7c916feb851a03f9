use std::fmt;

use serde::{Deserialize, Serialize};

/// Maximum number of labels a [`LabelSet`] can hold.
pub const LABELSET_CAPACITY: usize = 512;

const WORDS: usize = LABELSET_CAPACITY / 64;

/// Fixed-capacity bitset over label indices.
///
/// Ordering compares the sets as 512-bit integers, highest label first, so
/// that sorting gives the canonical order used for subsystem listings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LabelSet([u64; WORDS]);

impl LabelSet {
    pub fn new() -> Self {
        LabelSet([0; WORDS])
    }

    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < LABELSET_CAPACITY, "label {i} exceeds LabelSet capacity");
        let (w, b) = (i / 64, i % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        if i < LABELSET_CAPACITY {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < LABELSET_CAPACITY && self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1u64 << b) != 0).map(move |b| w * 64 + b)
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = LabelSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_iterate_across_words() {
        let s: LabelSet = [0, 63, 64, 200].into_iter().collect();
        assert_eq!(s.to_vec(), vec![0, 63, 64, 200]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(200) && !s.contains(199));
    }

    #[test]
    fn order_is_numeric_on_bits() {
        let a = LabelSet::singleton(3);
        let b: LabelSet = [0, 1, 2].into_iter().collect();
        let c = LabelSet::singleton(70);
        assert!(b < a && a < c);
    }
}
