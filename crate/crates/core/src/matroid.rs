//! The linear matroid on the columns of a matrix.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::colset::ColSet;
use crate::ratmat::{rank_of_rows, RationalMatrix};

/// Column matroid of `S` with a memoized rank oracle.
pub struct LinearMatroid {
    matrix: RationalMatrix,
    full_rank: usize,
    cache: Mutex<HashMap<ColSet, usize>>,
}

impl LinearMatroid {
    pub fn new(matrix: RationalMatrix) -> Self {
        let full_rank = matrix.rank();
        LinearMatroid {
            matrix,
            full_rank,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn ground_size(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn ground_set(&self) -> ColSet {
        ColSet::full(self.ground_size())
    }

    pub fn names(&self) -> &[String] {
        self.matrix.col_names()
    }

    pub fn rank(&self) -> usize {
        self.full_rank
    }

    /// Rank of the submatrix `S_A`.
    pub fn rank_of(&self, a: &ColSet) -> usize {
        debug_assert_eq!(a.universe(), self.ground_size());
        if a.is_empty() {
            return 0;
        }
        if a.len() == self.ground_size() {
            return self.full_rank;
        }
        if let Some(&r) = self.cache.lock().unwrap().get(a) {
            return r;
        }
        // computed outside the lock; a racing duplicate insert is harmless
        let r = rank_of_rows(self.matrix.column_rows(a));
        self.cache.lock().unwrap().insert(a.clone(), r);
        r
    }

    /// `ρ(A) = rank(A) + rank(R∖A) − rank(R) + 1`.
    pub fn connectivity(&self, a: &ColSet) -> usize {
        self.rank_of(a) + self.rank_of(&a.complement()) + 1 - self.full_rank
    }

    /// `rank(A) + rank(R∖A) − rank(R) < k`, i.e. `ρ(A) <= k`.
    pub fn is_k_separator(&self, a: &ColSet, k: usize) -> bool {
        self.connectivity(a) <= k
    }

    pub fn cached_subsets(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}
