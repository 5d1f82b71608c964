//! Exact rational linear programming.
//!
//! Two-phase tableau simplex over exact fractions with Bland's rule, so every
//! solve terminates and every reported optimum satisfies its constraints with
//! exact equality.

use num_traits::{One, Signed, Zero};

use crate::colset::ColSet;
use crate::error::{Error, Result};
use crate::kmodule::PolyhedronSpec;
use crate::ratmat::{Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

/// `max objective·x  s.t.  eq_matrix·x = eq_rhs`, with sign restrictions
/// given per variable.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub eq_matrix: RationalMatrix,
    pub eq_rhs: Vec<Rational>,
    pub var_kinds: Vec<VarKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

/// Extended bound for coordinate ranges. Variant order gives the natural
/// ordering `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl LpProblem {
    pub fn new(
        eq_matrix: RationalMatrix,
        eq_rhs: Vec<Rational>,
        var_kinds: Vec<VarKind>,
    ) -> Result<Self> {
        if eq_rhs.len() != eq_matrix.nrows() || var_kinds.len() != eq_matrix.ncols() {
            return Err(Error::DimensionMismatch("LP rhs or variable kinds".into()));
        }
        Ok(LpProblem {
            objective: vec![Rational::zero(); eq_matrix.ncols()],
            eq_matrix,
            eq_rhs,
            var_kinds,
        })
    }

    /// All variables nonnegative.
    pub fn standard(eq_matrix: RationalMatrix, eq_rhs: Vec<Rational>) -> Result<Self> {
        let kinds = vec![VarKind::NonNegative; eq_matrix.ncols()];
        Self::new(eq_matrix, eq_rhs, kinds)
    }

    pub fn with_objective(mut self, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), self.eq_matrix.ncols());
        self.objective = objective;
        self
    }

    pub fn nvars(&self) -> usize {
        self.eq_matrix.ncols()
    }

    /// Exact check that `x` satisfies every equality and sign constraint.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.nvars()
            && self.eq_matrix.mul_vec(x) == self.eq_rhs
            && x.iter()
                .zip(&self.var_kinds)
                .all(|(v, k)| *k == VarKind::Free || !v.is_negative())
    }
}

/// Solves `p` exactly. The simplex first runs on `i128` fractions and is
/// repeated with big rationals if any entry overflows.
pub fn solve(p: &LpProblem) -> LpOutcome {
    simplex::solve_in::<simplex::Small>(p)
        .unwrap_or_else(|| simplex::solve_in::<Rational>(p).expect("big rationals do not overflow"))
}

mod simplex {
    use num_rational::Ratio;
    use num_traits::{
        CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero,
    };

    use super::{LpOutcome, LpProblem, VarKind};
    use crate::ratmat::Rational;

    /// Arithmetic the tableau runs on. Operations return `None` on overflow.
    pub(super) trait Scalar: Clone + PartialOrd {
        fn zero() -> Self;
        fn one() -> Self;
        fn is_zero(&self) -> bool;
        fn is_positive(&self) -> bool;
        fn is_negative(&self) -> bool;
        fn add(&self, o: &Self) -> Option<Self>;
        fn sub(&self, o: &Self) -> Option<Self>;
        fn mul(&self, o: &Self) -> Option<Self>;
        fn div(&self, o: &Self) -> Option<Self>;
        fn neg(&self) -> Option<Self>;
        fn from_big(x: &Rational) -> Option<Self>;
        fn to_big(&self) -> Rational;
    }

    impl Scalar for Rational {
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn is_positive(&self) -> bool {
            Signed::is_positive(self)
        }
        fn is_negative(&self) -> bool {
            Signed::is_negative(self)
        }
        fn add(&self, o: &Self) -> Option<Self> {
            Some(self + o)
        }
        fn sub(&self, o: &Self) -> Option<Self> {
            Some(self - o)
        }
        fn mul(&self, o: &Self) -> Option<Self> {
            Some(self * o)
        }
        fn div(&self, o: &Self) -> Option<Self> {
            Some(self / o)
        }
        fn neg(&self) -> Option<Self> {
            Some(-self)
        }
        fn from_big(x: &Rational) -> Option<Self> {
            Some(x.clone())
        }
        fn to_big(&self) -> Rational {
            self.clone()
        }
    }

    pub(super) type Small = Ratio<i128>;

    impl Scalar for Small {
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn is_positive(&self) -> bool {
            Signed::is_positive(self)
        }
        fn is_negative(&self) -> bool {
            Signed::is_negative(self)
        }
        fn add(&self, o: &Self) -> Option<Self> {
            self.checked_add(o)
        }
        fn sub(&self, o: &Self) -> Option<Self> {
            self.checked_sub(o)
        }
        fn mul(&self, o: &Self) -> Option<Self> {
            self.checked_mul(o)
        }
        fn div(&self, o: &Self) -> Option<Self> {
            self.checked_div(o)
        }
        fn neg(&self) -> Option<Self> {
            Some(Ratio::new_raw(self.numer().checked_neg()?, *self.denom()))
        }
        fn from_big(x: &Rational) -> Option<Self> {
            Some(Ratio::new_raw(x.numer().to_i128()?, x.denom().to_i128()?))
        }
        fn to_big(&self) -> Rational {
            Rational::new((*self.numer()).into(), (*self.denom()).into())
        }
    }

    struct Tableau<T> {
        /// `B^-1 [A | b]`; the last entry of each row is the rhs.
        rows: Vec<Vec<T>>,
        basis: Vec<usize>,
    }

    enum Step {
        Optimal,
        Unbounded,
    }

    impl<T: Scalar> Tableau<T> {
        fn rhs(&self, i: usize) -> &T {
            self.rows[i].last().unwrap()
        }

        fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
            let inv = T::one().div(&self.rows[r][c])?;
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv)?;
                }
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = x.sub(&factor.mul(y)?)?;
                    }
                }
            }
            self.basis[r] = c;
            Some(())
        }

        /// Maximizes `cost` over columns `0..ncols` using Bland's rule.
        fn optimize(&mut self, cost: &[T], ncols: usize) -> Option<Step> {
            // reduced costs `c_j − c_B B^-1 A_j`, updated along with the rows
            let mut reduced: Vec<T> = cost[..ncols].to_vec();
            for (i, &b) in self.basis.iter().enumerate() {
                if cost[b].is_zero() {
                    continue;
                }
                for (d, a) in reduced.iter_mut().zip(&self.rows[i]) {
                    if !a.is_zero() {
                        *d = d.sub(&cost[b].mul(a)?)?;
                    }
                }
            }
            loop {
                let Some(j) = (0..ncols).find(|&j| reduced[j].is_positive()) else {
                    return Some(Step::Optimal);
                };

                let mut leave: Option<(usize, T)> = None;
                for i in 0..self.rows.len() {
                    let a = &self.rows[i][j];
                    if !a.is_positive() {
                        continue;
                    }
                    let ratio = self.rhs(i).div(a)?;
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
                let Some((r, _)) = leave else {
                    return Some(Step::Unbounded);
                };
                self.pivot(r, j)?;
                let factor = reduced[j].clone();
                for (d, a) in reduced.iter_mut().zip(&self.rows[r]) {
                    if !a.is_zero() {
                        *d = d.sub(&factor.mul(a)?)?;
                    }
                }
            }
        }

        fn value(&self, cost: &[T]) -> Option<T> {
            let mut v = T::zero();
            for (i, &b) in self.basis.iter().enumerate() {
                if !cost[b].is_zero() {
                    v = v.add(&cost[b].mul(self.rhs(i))?)?;
                }
            }
            Some(v)
        }
    }

    pub(super) fn solve_in<T: Scalar>(p: &LpProblem) -> Option<LpOutcome> {
        let m = p.eq_matrix.nrows();

        // standard form: free variables split into a difference of two columns
        let mut plus_col = Vec::with_capacity(p.nvars());
        let mut minus_col = Vec::with_capacity(p.nvars());
        let mut nstd = 0;
        for k in &p.var_kinds {
            plus_col.push(nstd);
            nstd += 1;
            if *k == VarKind::Free {
                minus_col.push(Some(nstd));
                nstd += 1;
            } else {
                minus_col.push(None);
            }
        }

        let width = nstd + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, src) in p.eq_matrix.rows().iter().enumerate() {
            let flip = Signed::is_negative(&p.eq_rhs[i]);
            let mut row = vec![T::zero(); width];
            for (j, a) in src.iter().enumerate() {
                if Zero::is_zero(a) {
                    continue;
                }
                let a = T::from_big(a)?;
                let a = if flip { a.neg()? } else { a };
                if let Some(mc) = minus_col[j] {
                    row[mc] = a.neg()?;
                }
                row[plus_col[j]] = a;
            }
            row[nstd + i] = T::one();
            let b = T::from_big(&p.eq_rhs[i])?;
            row[width - 1] = if flip { b.neg()? } else { b };
            rows.push(row);
        }
        let mut t = Tableau {
            rows,
            basis: (nstd..nstd + m).collect(),
        };

        // phase one: drive the artificial sum to zero
        let mut cost1 = vec![T::zero(); nstd + m];
        for c in cost1.iter_mut().skip(nstd) {
            *c = T::one().neg()?;
        }
        t.optimize(&cost1, nstd + m)?;
        if t.value(&cost1)?.is_negative() {
            return Some(LpOutcome::Infeasible);
        }

        // pivot remaining (zero-level) artificials out; drop redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= nstd {
                match (0..nstd).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j)?,
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in t.rows.iter_mut() {
            row.drain(nstd..nstd + m);
        }

        let mut cost2 = vec![T::zero(); nstd];
        for (j, c) in p.objective.iter().enumerate() {
            let c = T::from_big(c)?;
            if let Some(mc) = minus_col[j] {
                cost2[mc] = c.neg()?;
            }
            cost2[plus_col[j]] = c;
        }
        if let Step::Unbounded = t.optimize(&cost2, nstd)? {
            return Some(LpOutcome::Unbounded);
        }

        let mut std_point = vec![<Rational as Zero>::zero(); nstd];
        for (i, &b) in t.basis.iter().enumerate() {
            std_point[b] = t.rhs(i).to_big();
        }
        let point: Vec<Rational> = (0..p.nvars())
            .map(|j| match minus_col[j] {
                Some(mc) => &std_point[plus_col[j]] - &std_point[mc],
                None => std_point[plus_col[j]].clone(),
            })
            .collect();
        let value = t.value(&cost2)?.to_big();
        debug_assert!(
            p.is_feasible_point(&point),
            "simplex returned an infeasible point"
        );
        debug_assert_eq!(
            value,
            point
                .iter()
                .zip(&p.objective)
                .fold(<Rational as Zero>::zero(), |a, (x, c)| a + x * c)
        );
        Some(LpOutcome::Optimal { point, value })
    }
}

/// Exact `(inf, sup)` of variable `var` over the region of `region` (its
/// objective is ignored).
pub fn coordinate_range(region: &LpProblem, var: usize) -> Result<(Bound, Bound)> {
    let mut lp = region.clone();
    let mut obj = vec![Rational::zero(); lp.nvars()];
    obj[var] = Rational::one();
    lp.objective = obj.clone();
    let upper = match solve(&lp) {
        LpOutcome::Infeasible => return Err(Error::EmptyRegion),
        LpOutcome::Unbounded => Bound::PosInfinity,
        LpOutcome::Optimal { value, .. } => Bound::Finite(value),
    };
    obj[var] = -Rational::one();
    lp.objective = obj;
    let lower = match solve(&lp) {
        LpOutcome::Infeasible => return Err(Error::EmptyRegion),
        LpOutcome::Unbounded => Bound::NegInfinity,
        LpOutcome::Optimal { value, .. } => Bound::Finite(-value),
    };
    Ok((lower, upper))
}

/// Is `F` a feasible `A`-face of `P`, i.e. is there `x ∈ P` with `x_F = 0` and
/// `x_{A∖F} > 0`?
///
/// Writing `λx = u + 1_{A∖F}` gives `max λ  s.t. S u − λ b = −S 1_{A∖F},
/// u_F = 0, u >= 0, λ >= 0`. A solution with `λ > 0` can be scaled up
/// without bound, so `F` is feasible iff this LP is unbounded.
pub fn face_feasible(p: &PolyhedronSpec, a: &ColSet, f: &ColSet) -> bool {
    debug_assert!(f.is_subset(a));
    let s = p.matrix();
    let kept: Vec<usize> = f.complement().to_vec();
    let open = a.difference(f);
    let nx = kept.len();
    let mut data = Vec::with_capacity(s.nrows());
    let mut rhs = Vec::with_capacity(s.nrows());
    for (row, b) in s.rows().iter().zip(p.rhs()) {
        let mut r: Vec<Rational> = kept.iter().map(|&j| row[j].clone()).collect();
        r.push(-b.clone());
        data.push(r);
        rhs.push(-open.iter().fold(Rational::zero(), |acc, j| acc + &row[j]));
    }
    let mut obj = vec![Rational::zero(); nx + 1];
    obj[nx] = Rational::one();
    let lp = LpProblem {
        objective: obj,
        eq_matrix: RationalMatrix::from_rows(nx + 1, data).unwrap(),
        eq_rhs: rhs,
        var_kinds: vec![VarKind::NonNegative; nx + 1],
    };
    matches!(solve(&lp), LpOutcome::Unbounded)
}
