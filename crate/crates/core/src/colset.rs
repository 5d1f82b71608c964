//! Column subsets over a fixed universe `0..n`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

/// A subset of column indices. Ordered lexicographically by the sorted index
/// list, which makes it usable as a canonical cache key and tie-breaker.
#[derive(Clone, PartialEq, Eq)]
pub struct ColSet(FixedBitSet);

impl ColSet {
    pub fn empty(universe: usize) -> Self {
        ColSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ColSet(bits)
    }

    pub fn singleton(universe: usize, i: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Subset encoded by the low bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Self::from_indices(
            universe,
            (0..universe.min(64)).filter(|i| mask >> i & 1 == 1),
        )
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.remove(i);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn union(&self, other: &ColSet) -> ColSet {
        let mut out = self.clone();
        out.0.union_with(&other.0);
        out
    }

    pub fn intersection(&self, other: &ColSet) -> ColSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn difference(&self, other: &ColSet) -> ColSet {
        let mut out = self.clone();
        out.0.difference_with(&other.0);
        out
    }

    pub fn complement(&self) -> ColSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn is_subset(&self, other: &ColSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ColSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Names of the members, in index order.
    pub fn names<'a>(&'a self, names: &'a [String]) -> impl Iterator<Item = &'a str> + 'a {
        self.iter().map(move |i| names[i].as_str())
    }
}

impl Hash for ColSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl Ord for ColSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ColSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ColSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
