//! Deterministic inputs shared by the benchmarks.

use bwenum_core::ratmat::rat;
use bwenum_core::{PolyhedronSpec, RationalMatrix};

pub const SAMPLE9: [[i64; 9]; 6] = [
    [1, -1, 0, 0, 0, -1, 0, 0, 0],
    [0, 1, -1, 0, 1, 0, 0, -1, 0],
    [0, 0, 1, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, -1],
];

/// `Sx = 0, Σx = 1` over the 6 × 9 network matrix.
pub fn sample9() -> PolyhedronSpec {
    let rows: Vec<&[i64]> = SAMPLE9.iter().map(|r| r.as_slice()).collect();
    PolyhedronSpec::new(RationalMatrix::from_i64(&rows), vec![rat(0); 6])
        .unwrap()
        .normalized()
        .unwrap()
}

/// Band rows `x_i - x_{i+1} + x_{i+2} = 1` with a sum row, bounded and nonempty.
pub fn band(n: usize) -> PolyhedronSpec {
    assert!(n >= 3);
    let mut rows: Vec<Vec<i64>> = (0..n - 2)
        .step_by(2)
        .map(|i| {
            (0..n)
                .map(|j| [1, -1, 1].get(j.wrapping_sub(i)).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    rows.push(vec![1; n]);
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let s = RationalMatrix::from_i64(&refs);
    // x = 1 is feasible
    let mut b = vec![rat(1); rows.len() - 1];
    b.push(rat(n as i64));
    PolyhedronSpec::new(s, b).unwrap()
}
