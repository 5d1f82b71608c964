//! Bottom-up enumeration of minimal feasible faces over a [`ModTree`].
//!
//! A face of node `A` is represented by its zero set `F ⊆ A`. It is *feasible*
//! if some `x ∈ P` has `x_F = 0` and `x_{A∖F} > 0`, and *minimal* if `S_A` is
//! injective on `{x ∈ P^A : x_F = 0}`, where
//! `P^A = {x ∈ ℝ^A : S_A x = d^A + D^A α, x >= 0}` is the local polyhedron of
//! the module. Every minimal feasible face of a node is the union of minimal
//! feasible faces of its two children, so each node only has to filter the
//! pairwise unions. At the root, whose interface is `(b, ∅)`, the minimal
//! feasible faces are exactly the zero sets of the vertices.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::branchdec::ModTree;
use crate::colset::ColSet;
use crate::error::{Error, Result};
use crate::kmodule::{ModuleInterface, PolyhedronSpec};
use crate::lpexact::{self, LpProblem, VarKind};
use crate::ratmat::{rank_of_rows, Rational, RationalMatrix};

/// A candidate face: zero set `zeros` inside `module`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub module: ColSet,
    pub zeros: ColSet,
}

/// Exact points, deduplicated and ordered lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSet {
    points: BTreeSet<Vec<Rational>>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        self.points.insert(v)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.points.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.points.iter()
    }

    pub fn support(v: &[Rational]) -> ColSet {
        ColSet::from_indices(v.len(), (0..v.len()).filter(|&i| v[i].is_positive()))
    }

    pub fn zeros(v: &[Rational]) -> ColSet {
        ColSet::from_indices(v.len(), (0..v.len()).filter(|&i| v[i].is_zero()))
    }

    /// Each point satisfies `Sv = b`, `v >= 0`, and has linearly independent
    /// support columns.
    pub fn verify(&self, p: &PolyhedronSpec) -> std::result::Result<(), String> {
        for v in &self.points {
            if v.len() != p.ncols() {
                return Err(format!("point of length {}", v.len()));
            }
            if v.iter().any(Signed::is_negative) {
                return Err(format!("negative coordinate in {v:?}"));
            }
            if p.matrix().mul_vec(v) != p.rhs() {
                return Err(format!("Sv != b for {v:?}"));
            }
            let supp = Self::support(v);
            if rank_of_rows(p.matrix().column_rows(&supp)) != supp.len() {
                return Err(format!("dependent support for {v:?}"));
            }
        }
        Ok(())
    }
}

impl FromIterator<Vec<Rational>> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vec<Rational>>>(iter: I) -> Self {
        VertexSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vec<Rational>;
    type IntoIter = std::collections::btree_set::Iter<'a, Vec<Rational>>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `{x ∈ P^A : x_F = 0}` as an LP over `x_{A∖F} >= 0` and free `α`.
/// Returns the LP and the column indices behind its `x` variables.
fn local_region(
    p: &PolyhedronSpec,
    iface: &ModuleInterface,
    zeros: &ColSet,
) -> (LpProblem, Vec<usize>) {
    let open = iface.module.difference(zeros).to_vec();
    let dim = iface.dim;
    let ncols = open.len() + dim;
    let s = p.matrix();
    let data: Vec<Vec<Rational>> = (0..s.nrows())
        .map(|r| {
            let mut row = Vec::with_capacity(ncols);
            row.extend(open.iter().map(|&i| s.get(r, i).clone()));
            row.extend((0..dim).map(|j| -iface.variable_basis.get(r, j).clone()));
            row
        })
        .collect();
    let mut kinds = vec![VarKind::NonNegative; open.len()];
    kinds.extend(std::iter::repeat_n(VarKind::Free, dim));
    let lp = LpProblem::new(
        RationalMatrix::from_rows(ncols, data).unwrap(),
        iface.constant.clone(),
        kinds,
    )
    .unwrap();
    (lp, open)
}

/// `G = {i ∈ A : sup x_i > inf x_i over {x ∈ P^A : x_F = 0}}`, stopping
/// early once `S_G` has a dependent column (then `None`).
fn moving_columns(
    p: &PolyhedronSpec,
    iface: &ModuleInterface,
    zeros: &ColSet,
    stop_on_dependent: bool,
) -> Result<Option<ColSet>> {
    let (lp, open) = local_region(p, iface, zeros);
    if open.is_empty() && matches!(lpexact::solve(&lp), lpexact::LpOutcome::Infeasible) {
        return Err(Error::EmptyRegion);
    }
    let mut g = ColSet::empty(p.ncols());
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    for (t, &i) in open.iter().enumerate() {
        let (lo, hi) = lpexact::coordinate_range(&lp, t).map_err(|_| Error::EmptyRegion)?;
        if hi > lo {
            g.insert(i);
            if stop_on_dependent {
                cols.push(p.matrix().column(i));
                if rank_of_rows(cols.clone()) < cols.len() {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(g))
}

/// Whether `F` is a minimal `A`-face: `S_G` is injective for the set `G` of
/// coordinates that are not constant on `{x ∈ P^A : x_F = 0}`.
///
/// Fails with [`Error::EmptyRegion`] if that set is empty.
pub fn is_minimal(p: &PolyhedronSpec, iface: &ModuleInterface, zeros: &ColSet) -> Result<bool> {
    Ok(moving_columns(p, iface, zeros, true)?.is_some())
}

/// `dim {x ∈ P^A : x_F = 0}`, via the kernel of the lifted system
/// `[S_G | −D]` (coordinates outside `G` are constant there).
pub fn face_dimension(
    p: &PolyhedronSpec,
    iface: &ModuleInterface,
    zeros: &ColSet,
) -> Result<usize> {
    let g = moving_columns(p, iface, zeros, false)?.expect("no early exit");
    let mut vectors = p.matrix().column_rows(&g);
    vectors.extend((0..iface.dim).map(|j| iface.variable_basis.column(j)));
    let rank = if vectors.is_empty() {
        0
    } else {
        rank_of_rows(vectors)
    };
    Ok(g.len() + iface.dim - rank)
}

/// `G` for a feasible `F`. Some point of `P^A` is then positive on `A∖F`,
/// so the local region is full-dimensional in the affine space
/// `S_A x − Dα = d, x_F = 0` and `G` is the support of that space's
/// direction vectors.
fn moving_columns_of_feasible(
    p: &PolyhedronSpec,
    iface: &ModuleInterface,
    zeros: &ColSet,
) -> ColSet {
    let open = iface.module.difference(zeros).to_vec();
    let s = p.matrix();
    let data: Vec<Vec<Rational>> = (0..s.nrows())
        .map(|r| {
            open.iter()
                .map(|&i| s.get(r, i).clone())
                .chain((0..iface.dim).map(|j| -iface.variable_basis.get(r, j).clone()))
                .collect()
        })
        .collect();
    let kernel = RationalMatrix::from_rows(open.len() + iface.dim, data)
        .unwrap()
        .kernel_basis();
    let moving = (0..open.len()).filter(|&t| kernel.rows()[t].iter().any(|v| !v.is_zero()));
    ColSet::from_indices(p.ncols(), moving.map(|t| open[t]))
}

/// [`is_minimal`] for a zero set already known to be a feasible `A`-face,
/// decided by linear algebra alone.
pub fn is_minimal_feasible(p: &PolyhedronSpec, iface: &ModuleInterface, zeros: &ColSet) -> bool {
    let g = moving_columns_of_feasible(p, iface, zeros);
    g.is_empty() || rank_of_rows(p.matrix().column_rows(&g)) == g.len()
}

/// Minimal feasible faces of a single-column module: a subset of `{∅, A}`.
pub fn leaf_faces(p: &PolyhedronSpec, iface: &ModuleInterface) -> Result<BTreeSet<ColSet>> {
    let a = &iface.module;
    debug_assert_eq!(a.len(), 1);
    let mut out = BTreeSet::new();
    let none = ColSet::empty(p.ncols());
    if lpexact::face_feasible(p, a, &none) {
        out.insert(none);
    }
    if lpexact::face_feasible(p, a, a) && is_minimal_feasible(p, iface, a) {
        out.insert(a.clone());
    }
    Ok(out)
}

/// Minimal feasible faces of `C = A ∪̇ B` from those of `A` and `B`.
pub fn merge(
    p: &PolyhedronSpec,
    iface: &ModuleInterface,
    fa: &BTreeSet<ColSet>,
    fb: &BTreeSet<ColSet>,
) -> Result<BTreeSet<ColSet>> {
    let candidates: BTreeSet<ColSet> = fa
        .iter()
        .flat_map(|x| fb.iter().map(move |y| x.union(y)))
        .collect();
    let mut out = BTreeSet::new();
    for f in candidates {
        if lpexact::face_feasible(p, &iface.module, &f) && is_minimal_feasible(p, iface, &f) {
            out.insert(f);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumOptions {
    /// Proceed on unbounded polyhedra (no completeness or runtime guarantee
    /// beyond pointedness).
    pub allow_unbounded: bool,
}

/// Result of a full run, with the per-node face sets kept for inspection.
#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub vertices: VertexSet,
    /// Node sets of the tree, children first.
    pub node_sets: Vec<ColSet>,
    /// Minimal feasible faces stored at each node.
    pub faces: Vec<BTreeSet<ColSet>>,
    /// Candidate unions examined at each node.
    pub candidates: Vec<usize>,
    pub k: usize,
}

impl EnumerationReport {
    /// Violations of the per-node cardinality bounds: vertex-feasible faces
    /// at most `|V|`, minimal feasible faces at most `c^{k+1} <= |V|^{k+1}`
    /// with `c` the number of vertex-feasible faces. Only meaningful for
    /// bounded polyhedra.
    pub fn bound_violations(&self) -> Vec<String> {
        let v = self.vertices.len() as u128;
        let exp = self.k as u32 + 1;
        let mut out = Vec::new();
        for (node, faces) in self.node_sets.iter().zip(&self.faces) {
            let vertex_feasible: BTreeSet<ColSet> = self
                .vertices
                .iter()
                .map(|x| VertexSet::zeros(x).intersection(node))
                .collect();
            let c = vertex_feasible.len() as u128;
            let minimal = faces.len() as u128;
            if c > v {
                out.push(format!("{node:?}: {c} vertex-feasible faces > |V| = {v}"));
            }
            if minimal > c.saturating_pow(exp) {
                out.push(format!("{node:?}: {minimal} minimal faces > {c}^{exp}"));
            }
            if minimal > v.saturating_pow(exp) {
                out.push(format!("{node:?}: {minimal} minimal faces > {v}^{exp}"));
            }
        }
        out
    }
}

/// All vertices of a nonempty bounded `P` whose variable set is all columns.
pub fn enumerate_vertices(p: &PolyhedronSpec, tree: &ModTree) -> Result<VertexSet> {
    Ok(run(p, tree, EnumOptions::default())?.vertices)
}

/// Runs the recursion over `tree` and reconstructs the root's points.
pub fn run(p: &PolyhedronSpec, tree: &ModTree, opts: EnumOptions) -> Result<EnumerationReport> {
    let y = p.feasible_point()?.to_vec();
    let bounded = match p.unbounded_column()? {
        None => true,
        Some(i) if !opts.allow_unbounded => return Err(Error::Unbounded(p.col_names()[i].clone())),
        Some(_) => false,
    };
    if p.variable_set()? != p.all_columns() {
        return Err(Error::NotReduced);
    }
    let n = p.ncols();
    if n == 0 {
        let vertices = std::iter::once(y).collect();
        return Ok(EnumerationReport {
            vertices,
            node_sets: tree.nodes.iter().map(|n| n.set.clone()).collect(),
            faces: tree
                .nodes
                .iter()
                .map(|_| BTreeSet::from([ColSet::empty(0)]))
                .collect(),
            candidates: vec![1; tree.nodes.len()],
            k: tree.k,
        });
    }

    let mut faces: Vec<BTreeSet<ColSet>> = Vec::with_capacity(tree.nodes.len());
    let mut candidates = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let f = match node.children {
            None => {
                candidates.push(2);
                leaf_faces(p, &node.interface)?
            }
            Some((a, b)) => {
                candidates.push(faces[a].len() * faces[b].len());
                merge(p, &node.interface, &faces[a], &faces[b])?
            }
        };
        faces.push(f);
    }

    let root = &tree.nodes[tree.root()];
    debug_assert_eq!(root.set, p.all_columns());
    let mut vertices = VertexSet::new();
    for zeros in &faces[tree.root()] {
        vertices.insert(point_of_face(p, zeros));
    }
    let report = EnumerationReport {
        vertices,
        node_sets: tree.nodes.iter().map(|n| n.set.clone()).collect(),
        faces,
        candidates,
        k: tree.k,
    };
    debug_assert_eq!(report.vertices.verify(p), Ok(()));
    if bounded {
        debug_assert!(
            report.bound_violations().is_empty(),
            "{:?}",
            report.bound_violations()
        );
    }
    Ok(report)
}

/// The unique point of `P` with zero set exactly `zeros`, for a minimal
/// feasible face of the root.
fn point_of_face(p: &PolyhedronSpec, zeros: &ColSet) -> Vec<Rational> {
    let support = zeros.complement();
    let sub = p.matrix().select_columns(&support);
    let xs = sub
        .solve_exact(p.rhs())
        .expect("feasible face has a solution");
    let mut x = vec![Rational::zero(); p.ncols()];
    for (i, v) in support.iter().zip(xs) {
        x[i] = v;
    }
    assert!(
        support.iter().all(|i| x[i].is_positive()),
        "root face did not reconstruct to a point with the expected support"
    );
    assert_eq!(
        sub.rank(),
        support.len(),
        "root face support is not independent"
    );
    x
}

/// `x_{A∖F} > 0` and `x_F = 0` on `x`?
pub fn has_zero_pattern(x: &[Rational], a: &ColSet, zeros: &ColSet) -> bool {
    a.iter().all(|i| {
        if zeros.contains(i) {
            x[i].is_zero()
        } else {
            x[i].is_positive()
        }
    })
}
