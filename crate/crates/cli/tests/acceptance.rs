//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use bwenum_cli::commands::EXIT_OK;
use bwenum_cli::{cmd_vertices, DecompChoice, HPolyFile, VertexOptions, VerticesReport};
use bwenum_core::faceenum::has_zero_pattern;
use bwenum_core::kmodule::image_dimension;
use bwenum_core::lpexact::{face_feasible, solve};
use bwenum_core::oracle::{brute_force_vertices, definitional_k_module_check};
use bwenum_core::ratmat::{format_rational, parse_rational, rat};
use bwenum_core::{
    decompose, width_of, ColSet, LinearMatroid, LpOutcome, PolyhedronSpec, Rational,
    RationalMatrix, Strategy,
};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Bound violations seen by every enumeration in the suite.
#[derive(Default)]
struct Ledger {
    runs: usize,
    nodes: usize,
    violations: Vec<String>,
}

impl Ledger {
    fn record(&mut self, r: &VerticesReport) {
        self.runs += 1;
        self.nodes += r.enumeration.node_sets.len();
        self.violations.extend(r.enumeration.bound_violations());
    }
}

fn int_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RationalMatrix::from_i64(&refs)
}

/// `b = S·x0` for a random `x0 > 0` with `Σ x0 = 1`; a row of ones with
/// right-hand side 1 is appended when the result would be unbounded.
fn bounded_instance(rng: &mut StdRng, s: RationalMatrix) -> HPolyFile {
    let w: Vec<i64> = (0..s.ncols()).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = w.iter().sum();
    let x0: Vec<Rational> = w
        .iter()
        .map(|&v| Rational::new(v.into(), total.into()))
        .collect();
    let b = s.mul_vec(&x0);
    let p = PolyhedronSpec::new(s.clone(), b.clone()).unwrap();
    if p.is_bounded().unwrap() {
        return HPolyFile { s, b };
    }
    let n = s.ncols();
    let mut b = b;
    b.push(rat(1));
    HPolyFile {
        s: s.with_row("sum", vec![rat(1); n]).unwrap(),
        b,
    }
}

fn criterion_1(ledger: &mut Ledger) -> Verdict {
    let instances = 120;
    let mut failures = Vec::new();
    let mut vertices = 0;
    for seed in 0..instances {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=10);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let file = bounded_instance(&mut rng, int_matrix(&rows));
        match cmd_vertices(
            &file,
            &VertexOptions {
                check: true,
                ..Default::default()
            },
        ) {
            Ok(r) if r.exit_code() == EXIT_OK => {
                vertices += r.vertices.len();
                ledger.record(&r);
            }
            Ok(_) => failures.push(format!("seed {seed}: oracle mismatch")),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{}/{instances} instances agree with the oracle ({vertices} vertices) {failures:?}",
            instances as usize - failures.len()
        ),
    )
}

const SAMPLE9: [[i64; 9]; 6] = [
    [1, -1, 0, 0, 0, -1, 0, 0, 0],
    [0, 1, -1, 0, 1, 0, 0, -1, 0],
    [0, 0, 1, -1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, -1],
];

/// Produced once by an independent symbolic brute-force enumeration.
const SAMPLE9_VERTICES: [[&str; 9]; 3] = [
    [
        "1/11", "0", "2/11", "4/11", "2/11", "1/11", "1/11", "0", "0",
    ],
    ["1/6", "0", "0", "1/6", "1/6", "1/6", "0", "1/6", "1/6"],
    ["1/4", "1/4", "1/4", "1/4", "0", "0", "0", "0", "0"],
];

fn criterion_2(ledger: &mut Ledger) -> Verdict {
    let s = int_matrix(&SAMPLE9.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let file = HPolyFile {
        s,
        b: vec![rat(0); 6],
    };
    let golden: BTreeSet<Vec<Rational>> = SAMPLE9_VERTICES
        .iter()
        .map(|v| v.iter().map(|x| parse_rational(x).unwrap()).collect())
        .collect();
    let mut details = Vec::new();
    let mut pass = true;
    for decomp in [DecompChoice::Greedy, DecompChoice::Exhaustive] {
        let opts = VertexOptions {
            normalize: true,
            check: true,
            decomp: decomp.clone(),
            max_exhaustive: 9,
            ..Default::default()
        };
        match cmd_vertices(&file, &opts) {
            Ok(r) => {
                ledger.record(&r);
                let got: BTreeSet<Vec<Rational>> = r.vertices.iter().cloned().collect();
                pass &= r.exit_code() == EXIT_OK && got == golden;
                details.push(format!(
                    "{decomp:?}: {} vertices, width {}",
                    got.len(),
                    r.width
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{decomp:?}: {e}"));
            }
        }
    }
    verdict(pass, format!("golden count 3; {}", details.join("; ")))
}

/// Random reduced polyhedra with at least two columns.
fn reduced_instances(seed: u64, count: usize, max_n: usize) -> Vec<PolyhedronSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(2..=max_n);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let file = bounded_instance(&mut rng, int_matrix(&rows));
        let r = file.polyhedron().reduce().unwrap().reduced;
        if r.ncols() >= 2 {
            out.push(r);
        }
    }
    out
}

fn criterion_3() -> Verdict {
    let mut triples = 0usize;
    let mut disagreements = 0usize;
    let instances = reduced_instances(3, 25, 8);
    for p in &instances {
        let n = p.ncols();
        let m = p.q_matroid().unwrap();
        for mask in 0..(1u64 << n) {
            let a = ColSet::from_mask(n, mask);
            let dim = p.interface_dim(&a).unwrap();
            for k in 0..=3 {
                let by_rank = m.is_k_separator(&a, k + 1);
                let by_dim = dim <= k;
                let by_kernel = definitional_k_module_check(p.matrix(), &a, k);
                triples += 1;
                if by_rank != by_dim || by_dim != by_kernel {
                    disagreements += 1;
                }
            }
        }
    }
    verdict(
        disagreements == 0,
        format!(
            "{} matrices, {triples} (instance, A, k) triples, {disagreements} disagreements",
            instances.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = StdRng::seed_from_u64(4);
    let mut subsets = 0usize;
    let mut failures = 0usize;
    let count = 25;
    for _ in 0..count {
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=7);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let s = int_matrix(&rows);
        let matroid = LinearMatroid::new(s.clone());
        for mask in 0..(1u64 << n) {
            let a = ColSet::from_mask(n, mask);
            subsets += 1;
            if image_dimension(&s, &a) + 1 != matroid.connectivity(&a) {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("{count} matrices, {subsets} subsets, {failures} violations"),
    )
}

fn criterion_5(ledger: &Ledger) -> Verdict {
    verdict(
        ledger.violations.is_empty(),
        format!(
            "{} enumerations, {} tree nodes, {} violations {:?}",
            ledger.runs,
            ledger.nodes,
            ledger.violations.len(),
            ledger.violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

/// Block-diagonal assembly of `blocks`, with the right-hand sides stacked.
fn block_diagonal(blocks: &[HPolyFile]) -> HPolyFile {
    let n: usize = blocks.iter().map(|b| b.s.ncols()).sum();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut offset = 0;
    for blk in blocks {
        for (row, b) in blk.s.rows().iter().zip(&blk.b) {
            let mut full = vec![Rational::zero(); n];
            full[offset..offset + row.len()].clone_from_slice(row);
            rows.push(full);
            rhs.push(b.clone());
        }
        offset += blk.s.ncols();
    }
    HPolyFile {
        s: RationalMatrix::from_rows(n, rows).unwrap(),
        b: rhs,
    }
}

fn criterion_6(ledger: &mut Ledger) -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let instances = 15;
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for t in 0..instances {
        let nblocks = 2 + t % 2;
        let blocks: Vec<HPolyFile> = (0..nblocks)
            .map(|_| {
                let m = rng.gen_range(1..=2);
                let n = rng.gen_range(2..=4);
                let rows: Vec<Vec<i64>> = (0..m)
                    .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
                    .collect();
                bounded_instance(&mut rng, int_matrix(&rows))
            })
            .collect();
        // x0 > 0 and the appended sum row keep b nonzero in every block
        if blocks.iter().any(|b| b.b.iter().all(Zero::is_zero)) {
            failures.push(format!("instance {t}: block with b = 0"));
            continue;
        }
        let whole = block_diagonal(&blocks);
        let opts = VertexOptions {
            decomp: DecompChoice::Greedy,
            ..Default::default()
        };
        let per_block: Vec<Vec<Vec<Rational>>> = blocks
            .iter()
            .map(|b| {
                cmd_vertices(b, &opts)
                    .unwrap()
                    .vertices
                    .iter()
                    .cloned()
                    .collect()
            })
            .collect();
        let mut product: Vec<Vec<Rational>> = vec![Vec::new()];
        for vs in &per_block {
            product = product
                .iter()
                .flat_map(|p| vs.iter().map(move |v| [p.clone(), v.clone()].concat()))
                .collect();
        }
        let product: BTreeSet<Vec<Rational>> = product.into_iter().collect();
        match cmd_vertices(&whole, &opts) {
            Ok(r) => {
                ledger.record(&r);
                let got: BTreeSet<Vec<Rational>> = r.vertices.iter().cloned().collect();
                sizes.push(got.len());
                if got != product {
                    failures.push(format!(
                        "instance {t}: {} vertices, product has {}",
                        got.len(),
                        product.len()
                    ));
                }
            }
            Err(e) => failures.push(format!("instance {t}: {e}")),
        }
    }
    verdict(
        failures.is_empty(),
        format!("{instances} block products (2-3 blocks), vertex counts {sizes:?} {failures:?}"),
    )
}

/// Rows `i` touching columns `i, i+1, i+2` with entries in {±1, ±2}.
/// Rows on columns `i..i+3` with entries in `{±1, ±2}`, three of them left
/// out at random so the polytope keeps a small dimension as `n` grows.
fn band(rng: &mut StdRng, n: usize) -> RationalMatrix {
    let mut skipped = BTreeSet::new();
    while skipped.len() < 3 {
        skipped.insert(rng.gen_range(0..n - 2));
    }
    let mut rows = Vec::new();
    for i in (0..n - 2).filter(|i| !skipped.contains(i)) {
        let mut row = vec![0i64; n];
        for x in &mut row[i..i + 3] {
            *x = [1, -1, 2, -2][rng.gen_range(0..4)];
        }
        rows.push(row);
    }
    int_matrix(&rows)
}

fn criterion_7(ledger: &mut Ledger) -> Verdict {
    let mut pass = true;
    let mut details = Vec::new();
    for n in [10, 12, 20, 40] {
        let mut rng = StdRng::seed_from_u64(7 + n as u64);
        let s = band(&mut rng, n);
        let file = bounded_instance(&mut rng, s);
        let start = Instant::now();
        let opts = VertexOptions {
            decomp: DecompChoice::Greedy,
            check: n <= 12,
            ..Default::default()
        };
        match cmd_vertices(&file, &opts) {
            Ok(r) => {
                ledger.record(&r);
                let ok = r.exit_code() == EXIT_OK && r.width <= 4;
                pass &= ok;
                let oracle = if opts.check { ", oracle agrees" } else { "" };
                details.push(format!(
                    "n={n}: width {}, {} vertices{oracle}, {:.1?}{}",
                    r.width,
                    r.vertices.len(),
                    start.elapsed(),
                    if ok { "" } else { " FAILED" }
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("n={n}: {e}"));
            }
        }
    }
    verdict(pass, details.join("; "))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn criterion_8() -> Verdict {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut optima, mut verdicts, mut failures) = (0usize, 0usize, Vec::new());
    for t in 0..60 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=10);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let p = bounded_instance(&mut rng, int_matrix(&rows)).polyhedron();
        let verts = brute_force_vertices(&p, 16).unwrap();
        for _ in 0..3 {
            let c: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-5..=5))).collect();
            let lp = p.region().with_objective(c.clone());
            let best = verts.iter().map(|v| dot(&c, v)).max().unwrap();
            match solve(&lp) {
                LpOutcome::Optimal { point, value } => {
                    optima += 1;
                    if !lp.is_feasible_point(&point) || dot(&c, &point) != value || value != best {
                        failures.push(format!(
                            "instance {t}: optimum {} vs {}",
                            format_rational(&value),
                            format_rational(&best)
                        ));
                    }
                }
                other => failures.push(format!("instance {t}: {other:?}")),
            }
        }
        for _ in 0..20 {
            let a = ColSet::from_mask(n, rng.gen::<u64>() & ((1 << n) - 1));
            let f = ColSet::from_mask(n, rng.gen::<u64>() & ((1 << n) - 1)).intersection(&a);
            // barycenter of the vertices vanishing on F has the largest support
            let mut witness = vec![Rational::zero(); n];
            let mut any = false;
            for v in verts.iter().filter(|v| f.iter().all(|i| v[i].is_zero())) {
                any = true;
                for (w, x) in witness.iter_mut().zip(v) {
                    *w += x;
                }
            }
            let expected = any && has_zero_pattern(&witness, &a, &f);
            verdicts += 1;
            if face_feasible(&p, &a, &f) != expected {
                failures.push(format!(
                    "instance {t}: face_feasible disagrees for A={a:?} F={f:?}"
                ));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("{optima} optimal LPs exact, {verdicts} face verdicts match witness search {failures:?}"),
    )
}

fn main() -> ExitCode {
    // exhaustive width never exceeds the greedy width on the sample matrix
    let s = int_matrix(&SAMPLE9.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let m = LinearMatroid::new(s);
    let ex = width_of(&m, &decompose(&m, Strategy::Exhaustive, 9).unwrap()).unwrap();
    let gr = width_of(&m, &decompose(&m, Strategy::Greedy, 9).unwrap()).unwrap();
    assert!(ex <= gr);

    let mut ledger = Ledger::default();
    let start = Instant::now();
    let mut all = true;
    let mut report = |id: u32, name: &str, v: Verdict| {
        all &= v.pass;
        println!(
            "criterion {id} [{}] {name}: {} (exact)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    };
    report(
        1,
        "oracle equality on random bounded instances",
        criterion_1(&mut ledger),
    );
    report(
        2,
        "nine-column sample, golden vertex set",
        criterion_2(&mut ledger),
    );
    report(
        3,
        "separator and interface tests match the kernel definition",
        criterion_3(),
    );
    report(
        4,
        "interface dimension equals connectivity minus one",
        criterion_4(),
    );
    let v6 = criterion_6(&mut ledger);
    let v7 = criterion_7(&mut ledger);
    // bounds are gathered over every enumeration above
    report(5, "per-node cardinality bounds", criterion_5(&ledger));
    report(6, "block products", v6);
    report(7, "band matrices", v7);
    report(8, "LP exactness and face feasibility", criterion_8());
    println!("acceptance finished in {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
