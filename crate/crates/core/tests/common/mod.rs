#![allow(dead_code)]

use bwenum_core::branchdec::to_mod_family;
use bwenum_core::faceenum::{run, EnumOptions};
use bwenum_core::ratmat::rat;
use bwenum_core::{decompose, PolyhedronSpec, Rational, RationalMatrix, Strategy, VertexSet};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

pub const SAMPLE9: [[i64; 9]; 6] = [
    [1, -1, 0, 0, 0, -1, 0, 0, 0],
    [0, 1, -1, 0, 1, 0, 0, -1, 0],
    [0, 0, 1, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, -1],
];

pub fn matrix(rows: &[Vec<i64>]) -> RationalMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RationalMatrix::from_i64(&refs)
}

pub fn sample9() -> RationalMatrix {
    matrix(&SAMPLE9.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Runs the full pipeline on `p` and lifts the vertices back to its columns.
pub fn enumerate(p: &PolyhedronSpec, strategy: Strategy) -> VertexSet {
    let red = p.reduce().unwrap();
    let d = decompose(red.reduced.q_matroid().unwrap(), strategy, 12).unwrap();
    let tree = to_mod_family(&red.reduced, &d).unwrap();
    let report = run(&red.reduced, &tree, EnumOptions::default()).unwrap();
    report.vertices.iter().map(|v| red.lift(v)).collect()
}

pub fn random_matrix(rng: &mut StdRng, m: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

/// A feasible random polyhedron: `b = S x0` for a sparse nonnegative `x0`,
/// with a bounding sum row added when needed.
pub fn random_polyhedron(rng: &mut StdRng, max_m: usize, max_n: usize) -> PolyhedronSpec {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let s = random_matrix(rng, m, n, -2, 2);
    let x0: Vec<i64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                0
            } else {
                rng.gen_range(1..=3)
            }
        })
        .collect();
    bounded_polyhedron(matrix(&s), &x0)
}

pub fn bounded_polyhedron(s: RationalMatrix, x0: &[i64]) -> PolyhedronSpec {
    let x: Vec<Rational> = x0.iter().map(|&v| rat(v)).collect();
    let b = s.mul_vec(&x);
    let p = PolyhedronSpec::new(s.clone(), b.clone()).unwrap();
    if p.is_bounded().unwrap() {
        return p;
    }
    let total = x.iter().fold(Rational::zero(), |a, v| a + v);
    let s = s.with_row("sum", vec![rat(1); s.ncols()]).unwrap();
    let mut b = b;
    b.push(total);
    PolyhedronSpec::new(s, b).unwrap()
}
