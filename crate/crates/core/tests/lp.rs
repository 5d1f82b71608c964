mod common;

use bwenum_core::faceenum::has_zero_pattern;
use bwenum_core::lpexact::{face_feasible, solve};
use bwenum_core::oracle::brute_force_vertices;
use bwenum_core::ratmat::rat;
use bwenum_core::{ColSet, LpOutcome, Rational};
use common::random_polyhedron;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[test]
fn optimum_matches_best_vertex() {
    for seed in 0..60u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_polyhedron(&mut rng, 4, 8);
        let verts = brute_force_vertices(&p, 16).unwrap();
        let c: Vec<Rational> = (0..p.ncols()).map(|_| rat(rng.gen_range(-5..=5))).collect();
        let lp = p.region().with_objective(c.clone());
        let best = verts.iter().map(|v| dot(&c, v)).max().unwrap();
        match solve(&lp) {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(value, best, "seed {seed}");
                assert_eq!(dot(&c, &point), value);
                assert!(lp.is_feasible_point(&point));
            }
            other => panic!("seed {seed}: {other:?}"),
        }
    }
}

/// A zero pattern is feasible exactly when the barycenter of the vertices
/// vanishing on `F` is positive on `A∖F`.
#[test]
fn face_feasibility_matches_witness_search() {
    for seed in 100..140u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_polyhedron(&mut rng, 4, 7);
        let n = p.ncols();
        let verts = brute_force_vertices(&p, 16).unwrap();
        for _ in 0..15 {
            let a = ColSet::from_mask(n, rng.gen::<u64>() & ((1 << n) - 1));
            let f = ColSet::from_mask(n, rng.gen::<u64>() & ((1 << n) - 1)).intersection(&a);
            let on_face: Vec<_> = verts
                .iter()
                .filter(|v| f.iter().all(|i| v[i].is_zero()))
                .collect();
            let witness = (!on_face.is_empty()).then(|| {
                let mut x = vec![Rational::zero(); n];
                for v in &on_face {
                    for (xi, vi) in x.iter_mut().zip(v.iter()) {
                        *xi += vi;
                    }
                }
                x
            });
            let expected = witness.is_some_and(|x| has_zero_pattern(&x, &a, &f));
            assert_eq!(
                face_feasible(&p, &a, &f),
                expected,
                "seed {seed} A={a:?} F={f:?}"
            );
        }
    }
}
