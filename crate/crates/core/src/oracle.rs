//! Brute-force ground truth, kept independent of the enumeration path.

use crate::colset::ColSet;
use crate::error::{Error, Result};
use crate::faceenum::VertexSet;
use crate::kmodule::PolyhedronSpec;
use crate::ratmat::{is_nonnegative, RationalMatrix};

pub const DEFAULT_CAP: usize = 16;

/// Vertices as basic feasible solutions: for every column subset `B` with
/// independent columns, solve `S_B x_B = b` and keep nonnegative solutions.
pub fn brute_force_vertices(p: &PolyhedronSpec, cap: usize) -> Result<VertexSet> {
    let n = p.ncols();
    if n > cap || n >= 64 {
        return Err(Error::OracleCap { n, cap });
    }
    let s = p.matrix();
    let rank = s.rank();
    let mut out = VertexSet::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize > rank {
            continue;
        }
        let b = ColSet::from_mask(n, mask);
        let sub = s.select_columns(&b);
        if sub.rank() != b.len() {
            continue;
        }
        let Some(xb) = sub.solve_exact(p.rhs()) else {
            continue;
        };
        if !is_nonnegative(&xb) {
            continue;
        }
        let mut x = vec![num_traits::Zero::zero(); n];
        for (i, v) in b.iter().zip(xb) {
            x[i] = v;
        }
        if s.mul_vec(&x) == p.rhs() {
            out.insert(x);
        }
    }
    Ok(out)
}

/// `A` is a k-module of `ker S` straight from the definition: the vectors
/// `S_A w_A` over a kernel basis span at most `k` dimensions.
pub fn definitional_k_module_check(s: &RationalMatrix, a: &ColSet, k: usize) -> bool {
    let kernel = s.kernel_basis();
    let sa = s.select_columns(a);
    let idx = a.to_vec();
    // columns S_A w_A, assembled as an |M| × dim ker matrix
    let images: Vec<Vec<_>> = (0..kernel.ncols())
        .map(|c| {
            let w: Vec<_> = idx.iter().map(|&i| kernel.get(i, c).clone()).collect();
            sa.mul_vec(&w)
        })
        .collect();
    let image = RationalMatrix::from_rows(s.nrows(), images).unwrap();
    image.rank() <= k
}
