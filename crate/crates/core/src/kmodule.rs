//! k-module analysis of `P = {x : Sx = b, x >= 0}`.
//!
//! A column set `A` is a k-module when `S_A x_A` stays inside `d + span(D)`
//! for every `x ∈ P`, with `D` having `k` columns. After removing the
//! coordinates that are constant on `P` (the complement of the variable set
//! `Q`), k-modules are exactly the `(k+1)`-separators of the column matroid
//! of `S_Q`, and the minimal `k` is `dim(S_A pr_A ker S_Q)`.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::colset::ColSet;
use crate::error::{Error, Result};
use crate::lpexact::{self, Bound, LpOutcome, LpProblem};
use crate::matroid::LinearMatroid;
use crate::ratmat::{rank_of_rows, rat, Rational, RationalMatrix};

struct Analysis {
    ranges: Vec<(Bound, Bound)>,
    q: ColSet,
    point: Vec<Rational>,
}

/// The polyhedron `{x ∈ ℝ^R : Sx = b, x >= 0}` with lazily computed
/// coordinate ranges and variable set.
pub struct PolyhedronSpec {
    s: RationalMatrix,
    b: Vec<Rational>,
    analysis: OnceLock<Option<Analysis>>,
    // kernel basis of S_Q, rows indexed by all of R (zero outside Q)
    q_kernel: OnceLock<RationalMatrix>,
    q_matroid: OnceLock<LinearMatroid>,
}

impl Clone for PolyhedronSpec {
    fn clone(&self) -> Self {
        PolyhedronSpec::new(self.s.clone(), self.b.clone()).unwrap()
    }
}

impl std::fmt::Debug for PolyhedronSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolyhedronSpec")
            .field("s", &self.s)
            .field("b", &self.b)
            .finish()
    }
}

impl PolyhedronSpec {
    pub fn new(s: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if b.len() != s.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "b has {} entries, S has {} rows",
                b.len(),
                s.nrows()
            )));
        }
        Ok(PolyhedronSpec {
            s,
            b,
            analysis: OnceLock::new(),
            q_kernel: OnceLock::new(),
            q_matroid: OnceLock::new(),
        })
    }

    /// Appends the row `Σ x_i = 1`; for `b = 0` this turns the flux cone into
    /// the polytope whose vertices are the elementary flux modes.
    pub fn normalized(&self) -> Result<Self> {
        let mut name = "sum".to_string();
        while self.s.row_names().contains(&name) {
            name.push('_');
        }
        let s = self.s.with_row(&name, vec![rat(1); self.ncols()])?;
        let mut b = self.b.clone();
        b.push(rat(1));
        Self::new(s, b)
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.s
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    pub fn ncols(&self) -> usize {
        self.s.ncols()
    }

    pub fn col_names(&self) -> &[String] {
        self.s.col_names()
    }

    pub fn all_columns(&self) -> ColSet {
        ColSet::full(self.ncols())
    }

    /// `Sx = b, x >= 0` as an LP with zero objective.
    pub fn region(&self) -> LpProblem {
        LpProblem::standard(self.s.clone(), self.b.clone()).unwrap()
    }

    fn analysis(&self) -> Result<&Analysis> {
        self.analysis
            .get_or_init(|| {
                let region = self.region();
                let point = match lpexact::solve(&region) {
                    LpOutcome::Optimal { point, .. } => point,
                    _ => return None,
                };
                let mut ranges = Vec::with_capacity(self.ncols());
                let mut q = ColSet::empty(self.ncols());
                for i in 0..self.ncols() {
                    let range = lpexact::coordinate_range(&region, i).ok()?;
                    if range.0 != range.1 {
                        q.insert(i);
                    }
                    ranges.push(range);
                }
                Some(Analysis { ranges, q, point })
            })
            .as_ref()
            .ok_or(Error::EmptyPolyhedron)
    }

    pub fn is_empty(&self) -> bool {
        self.analysis().is_err()
    }

    /// Some point of `P` (the phase-one solution).
    pub fn feasible_point(&self) -> Result<&[Rational]> {
        Ok(&self.analysis()?.point)
    }

    /// `(x_i^min, x_i^max)` per column.
    pub fn ranges(&self) -> Result<&[(Bound, Bound)]> {
        Ok(&self.analysis()?.ranges)
    }

    /// `Q = {i : x_i^max ≠ x_i^min}`.
    pub fn variable_set(&self) -> Result<ColSet> {
        Ok(self.analysis()?.q.clone())
    }

    /// First column without a finite supremum, if any.
    pub fn unbounded_column(&self) -> Result<Option<usize>> {
        Ok(self
            .ranges()?
            .iter()
            .position(|(_, hi)| *hi == Bound::PosInfinity))
    }

    pub fn is_bounded(&self) -> Result<bool> {
        Ok(self.unbounded_column()?.is_none())
    }

    /// Projects out the constant coordinates:
    /// `{x_Q : S_Q x_Q = b − S_{R∖Q} x_{R∖Q}, x_Q >= 0}`.
    pub fn reduce(&self) -> Result<Reduction> {
        let a = self.analysis()?;
        let kept = a.q.to_vec();
        let fixed: Vec<(usize, Rational)> = (0..self.ncols())
            .filter(|&i| !a.q.contains(i))
            .map(|i| {
                (
                    i,
                    a.ranges[i]
                        .0
                        .finite()
                        .expect("lower bound of x >= 0")
                        .clone(),
                )
            })
            .collect();
        let mut rhs = self.b.clone();
        for (i, v) in &fixed {
            if v.is_zero() {
                continue;
            }
            for (r, row) in rhs.iter_mut().zip(self.s.rows()) {
                *r -= &row[*i] * v;
            }
        }
        let reduced = PolyhedronSpec::new(self.s.select_columns(&a.q), rhs)?;
        Ok(Reduction {
            reduced,
            kept,
            fixed,
            original_ncols: self.ncols(),
        })
    }

    fn q_kernel(&self) -> Result<&RationalMatrix> {
        let q = &self.analysis()?.q;
        Ok(self.q_kernel.get_or_init(|| {
            let k = self.s.select_columns(q).kernel_basis();
            let qidx = q.to_vec();
            let mut rows = vec![vec![Rational::zero(); k.ncols()]; self.ncols()];
            for (r, &i) in qidx.iter().enumerate() {
                rows[i] = k.rows()[r].clone();
            }
            RationalMatrix::new(self.s.col_names().to_vec(), k.col_names().to_vec(), rows).unwrap()
        }))
    }

    /// Column matroid of `S_Q`, indexed `0..|Q|`.
    pub fn q_matroid(&self) -> Result<&LinearMatroid> {
        let q = &self.analysis()?.q;
        Ok(self
            .q_matroid
            .get_or_init(|| LinearMatroid::new(self.s.select_columns(q))))
    }

    /// `A ∩ Q` re-indexed into the column space of `S_Q`.
    pub fn to_q_space(&self, a: &ColSet) -> Result<ColSet> {
        let q = &self.analysis()?.q;
        let qidx = q.to_vec();
        Ok(ColSet::from_indices(
            qidx.len(),
            qidx.iter()
                .enumerate()
                .filter(|(_, i)| a.contains(**i))
                .map(|(r, _)| r),
        ))
    }

    /// True iff `A ∩ Q` is a `(k+1)`-separator of the matroid of `S_Q`.
    pub fn is_k_module(&self, a: &ColSet, k: usize) -> Result<bool> {
        let aq = self.to_q_space(a)?;
        Ok(self.q_matroid()?.is_k_separator(&aq, k + 1))
    }

    fn interface_generators(&self, a: &ColSet) -> Result<Vec<Vec<Rational>>> {
        Ok(image_generators(&self.s, self.q_kernel()?, a))
    }

    /// Minimal `k` for which `A` is a k-module:
    /// `dim span{S_A w_A : w ∈ ker S_Q}`.
    pub fn interface_dim(&self, a: &ColSet) -> Result<usize> {
        Ok(rank_of_rows(self.interface_generators(a)?))
    }

    /// Constant and variable interface `(d, D)` of `A` with minimal `D`.
    pub fn interface(&self, a: &ColSet) -> Result<ModuleInterface> {
        let y = self.feasible_point()?;
        let constant = s_a_times(&self.s, a, y);
        let gens = self.interface_generators(a)?;
        let m = self.s.nrows();
        // generators as columns of an m × g matrix, then keep an independent subset
        let g = RationalMatrix::from_rows(
            gens.len(),
            (0..m)
                .map(|r| gens.iter().map(|v| v[r].clone()).collect())
                .collect(),
        )?;
        let basis_cols = g.independent_columns();
        let data = (0..m)
            .map(|r| basis_cols.iter().map(|&c| g.get(r, c).clone()).collect())
            .collect();
        let names = (1..=basis_cols.len())
            .map(|i| format!("alpha{i}"))
            .collect();
        let variable_basis = RationalMatrix::new(self.s.row_names().to_vec(), names, data)?;
        Ok(ModuleInterface {
            module: a.clone(),
            constant,
            dim: basis_cols.len(),
            variable_basis,
        })
    }
}

/// `S_A x_A` for a full-length `x`.
pub fn s_a_times(s: &RationalMatrix, a: &ColSet, x: &[Rational]) -> Vec<Rational> {
    s.rows()
        .iter()
        .map(|row| {
            a.iter()
                .filter(|&i| !row[i].is_zero() && !x[i].is_zero())
                .fold(Rational::zero(), |acc, i| acc + &row[i] * &x[i])
        })
        .collect()
}

/// `{S_A w_A}` for each kernel basis column `w` (kernel rows indexed like the
/// columns of `s`).
fn image_generators(s: &RationalMatrix, kernel: &RationalMatrix, a: &ColSet) -> Vec<Vec<Rational>> {
    (0..kernel.ncols())
        .map(|c| s_a_times(s, a, &kernel.column(c)))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// `dim(S_A pr_A ker S)` computed directly from a kernel basis of `s`.
pub fn image_dimension(s: &RationalMatrix, a: &ColSet) -> usize {
    rank_of_rows(image_generators(s, &s.kernel_basis(), a))
}

/// The result of removing constant coordinates from a polyhedron.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// The polyhedron over `Q` only.
    pub reduced: PolyhedronSpec,
    /// Original indices of the reduced columns.
    pub kept: Vec<usize>,
    /// Constant coordinates and their values.
    pub fixed: Vec<(usize, Rational)>,
    pub original_ncols: usize,
}

impl Reduction {
    /// Re-attaches the fixed coordinates to a point of the reduced polyhedron.
    pub fn lift(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.original_ncols];
        for (&i, v) in self.kept.iter().zip(x) {
            out[i] = v.clone();
        }
        for (i, v) in &self.fixed {
            out[*i] = v.clone();
        }
        out
    }

    pub fn fixed_named<'a>(
        &'a self,
        names: &'a [String],
    ) -> impl Iterator<Item = (&'a str, &'a Rational)> {
        self.fixed.iter().map(move |(i, v)| (names[*i].as_str(), v))
    }
}

/// Interface `(d, D)` of a module: `S_A x_A ∈ d + span(D)` for all `x ∈ P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleInterface {
    pub module: ColSet,
    pub constant: Vec<Rational>,
    /// `|M| × dim`, independent columns.
    pub variable_basis: RationalMatrix,
    pub dim: usize,
}

impl ModuleInterface {
    /// Whether `S_A x_A − d ∈ span(D)`.
    pub fn admits(&self, s: &RationalMatrix, x: &[Rational]) -> bool {
        let diff: Vec<Rational> = s_a_times(s, &self.module, x)
            .into_iter()
            .zip(&self.constant)
            .map(|(v, d)| v - d)
            .collect();
        self.variable_basis.solve_exact(&diff).is_some()
    }

    /// Reduced row echelon form of `span(D)`, for comparing spans.
    pub fn span_rref(&self) -> Vec<Vec<Rational>> {
        let mut rows = self.variable_basis.transpose().rows().to_vec();
        let n = self.variable_basis.nrows();
        let r = crate::ratmat::row_reduce(&mut rows, n).len();
        rows.truncate(r);
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(rows: &[&[i64]], b: &[i64]) -> PolyhedronSpec {
        PolyhedronSpec::new(
            RationalMatrix::from_i64(rows),
            b.iter().map(|&v| rat(v)).collect(),
        )
        .unwrap()
    }

    fn set(n: usize, ix: &[usize]) -> ColSet {
        ColSet::from_indices(n, ix.iter().copied())
    }

    #[test]
    fn variable_set_examples() {
        assert_eq!(
            poly(&[&[1, 1]], &[1]).variable_set().unwrap(),
            ColSet::full(2)
        );
        assert_eq!(
            poly(&[&[1, 0], &[0, 1]], &[2, 3]).variable_set().unwrap(),
            ColSet::empty(2)
        );
        assert_eq!(
            poly(&[&[1]], &[-1]).variable_set(),
            Err(Error::EmptyPolyhedron)
        );
    }

    #[test]
    fn reduce_examples() {
        let p = poly(&[&[1, 1]], &[1]);
        let r = p.reduce().unwrap();
        assert!(r.fixed.is_empty());
        assert_eq!(r.kept, vec![0, 1]);
        assert_eq!(r.reduced.matrix(), p.matrix());

        // x1 = 2 pinned, x2 + x3 = 1
        let p = poly(&[&[1, 0, 0], &[0, 1, 1]], &[2, 1]);
        let r = p.reduce().unwrap();
        assert_eq!(r.fixed, vec![(0, rat(2))]);
        assert_eq!(r.kept, vec![1, 2]);
        assert_eq!(r.reduced.rhs(), &[rat(0), rat(1)]);
        assert_eq!(r.reduced.variable_set().unwrap(), ColSet::full(2));
        assert_eq!(r.lift(&[rat(1), rat(0)]), vec![rat(2), rat(1), rat(0)]);
    }

    #[test]
    fn module_examples() {
        // any |A| = k is a k-module
        let p = poly(&[&[1, 2, -1, 0], &[0, 1, 1, 1]], &[2, 3]);
        assert!(p.is_k_module(&set(4, &[0, 2]), 2).unwrap());
        assert!(p.is_k_module(&set(4, &[3]), 1).unwrap());

        let block = poly(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], &[1, 1]);
        assert!(block.is_k_module(&set(4, &[0, 1]), 0).unwrap());
        assert!(!block.is_k_module(&set(4, &[0, 2]), 0).unwrap());

        // columns (1,0), (0,1), (1,1) with b = (1,1): Q = R
        let tri = poly(&[&[1, 0, 1], &[0, 1, 1]], &[1, 1]);
        assert_eq!(tri.variable_set().unwrap(), ColSet::full(3));
        assert!(!tri.is_k_module(&set(3, &[0]), 0).unwrap());
        assert!(tri.is_k_module(&set(3, &[0]), 1).unwrap());
    }

    #[test]
    fn interface_dim_examples() {
        let tri = poly(&[&[1, 0, 1], &[0, 1, 1]], &[1, 1]);
        assert_eq!(tri.interface_dim(&ColSet::empty(3)).unwrap(), 0);
        assert_eq!(tri.interface_dim(&set(3, &[0])).unwrap(), 1);
        assert_eq!(tri.interface_dim(&ColSet::full(3)).unwrap(), 0);
    }

    #[test]
    fn interface_examples() {
        let block = poly(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], &[1, 1]);
        let i = block.interface(&set(4, &[0, 1])).unwrap();
        assert_eq!(i.dim, 0);
        assert_eq!(i.constant, vec![rat(1), rat(0)]);

        let full = block.interface(&ColSet::full(4)).unwrap();
        assert_eq!(full.dim, 0);
        assert_eq!(full.constant, vec![rat(1), rat(1)]);

        let tri = poly(&[&[1, 0, 1], &[0, 1, 1]], &[1, 1]);
        let i = tri.interface(&set(3, &[0])).unwrap();
        assert_eq!(i.dim, 1);
        // span((1,0))
        assert_eq!(i.span_rref(), vec![vec![rat(1), rat(0)]]);
        assert!(i.admits(tri.matrix(), &[rat(0), rat(0), rat(1)]));
        assert!(i.admits(tri.matrix(), &[rat(1), rat(1), rat(0)]));
    }

    #[test]
    fn normalization_row() {
        let cone = poly(&[&[1, -1]], &[0]);
        assert!(!cone.is_bounded().unwrap());
        let n = cone.normalized().unwrap();
        assert!(n.is_bounded().unwrap());
        assert_eq!(n.matrix().row_names().last().unwrap(), "sum");
    }
}
