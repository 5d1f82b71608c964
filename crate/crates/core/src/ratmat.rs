//! Exact rational scalars and dense matrices with named rows and columns.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::colset::ColSet;
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in canonical form.
pub type Rational = BigRational;

/// Parses `p/q` or `p` (base 10, optional leading `-`, no whitespace).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            let den = int(q)?;
            if den.is_zero() || q.starts_with(['-', '+']) {
                return Err(bad());
            }
            Ok(Rational::new(int(p)?, den))
        }
    }
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// In-place reduction to reduced row echelon form over the first `ncols`
/// columns. Returns the pivot column of each nonzero row, in order; rows past
/// the pivot count are zero afterwards.
pub(crate) fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // smallest-bit-size pivot keeps coefficient growth down
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| bit_size(&rows[i][c]));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().unwrap();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the matrix whose rows are given.
pub(crate) fn rank_of_rows(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    row_reduce(&mut rows, ncols).len()
}

/// Dense rational matrix with named rows (set `M`) and columns (set `R`).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    row_names: Vec<String>,
    col_names: Vec<String>,
    data: Vec<Vec<Rational>>,
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

impl RationalMatrix {
    pub fn new(
        row_names: Vec<String>,
        col_names: Vec<String>,
        data: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if data.len() != row_names.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} row names for {} rows",
                row_names.len(),
                data.len()
            )));
        }
        if let Some(row) = data.iter().find(|r| r.len() != col_names.len()) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} with {} column names",
                row.len(),
                col_names.len()
            )));
        }
        check_unique(&row_names)?;
        check_unique(&col_names)?;
        Ok(RationalMatrix {
            row_names,
            col_names,
            data,
        })
    }

    /// Rows named `m1..`, columns `x1..`.
    pub fn from_rows(ncols: usize, data: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(
            default_names("m", data.len()),
            default_names("x", ncols),
            data,
        )
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        Self::from_rows(ncols, data).expect("ragged integer matrix")
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_rows(ncols, vec![vec![Rational::zero(); ncols]; nrows]).unwrap()
    }

    pub fn with_col_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.ncols() {
            return Err(Error::DimensionMismatch("column name count".into()));
        }
        check_unique(&names)?;
        self.col_names = names;
        Ok(self)
    }

    pub fn nrows(&self) -> usize {
        self.data.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_names.len()
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn col_index(&self, name: &str) -> Option<usize> {
        self.col_names.iter().position(|n| n == name)
    }

    pub fn col_set<S: AsRef<str>>(&self, names: &[S]) -> Result<ColSet> {
        let mut set = ColSet::empty(self.ncols());
        for n in names {
            let n = n.as_ref();
            set.insert(
                self.col_index(n)
                    .ok_or_else(|| Error::UnknownColumn(n.to_string()))?,
            );
        }
        Ok(set)
    }

    /// `S_A`: the columns in `cols`, names and entries preserved.
    pub fn select_columns(&self, cols: &ColSet) -> RationalMatrix {
        let idx = cols.to_vec();
        RationalMatrix {
            row_names: self.row_names.clone(),
            col_names: idx.iter().map(|&j| self.col_names[j].clone()).collect(),
            data: self
                .data
                .iter()
                .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
                .collect(),
        }
    }

    /// Rows of `S_A` without building names.
    pub(crate) fn column_rows(&self, cols: &ColSet) -> Vec<Vec<Rational>> {
        let idx = cols.to_vec();
        self.data
            .iter()
            .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
            .collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        RationalMatrix {
            row_names: self.col_names.clone(),
            col_names: self.row_names.clone(),
            data: (0..self.ncols()).map(|j| self.column(j)).collect(),
        }
    }

    pub fn with_row(&self, name: &str, row: Vec<Rational>) -> Result<RationalMatrix> {
        let mut names = self.row_names.clone();
        names.push(name.to_string());
        let mut data = self.data.clone();
        data.push(row);
        RationalMatrix::new(names, self.col_names.clone(), data)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(
            v.len(),
            self.ncols(),
            "vector length must match column count"
        );
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.data.clone())
    }

    /// Basis of `ker M`, one vector per column of the result. Result rows are
    /// indexed by the columns of `self`.
    pub fn kernel_basis(&self) -> RationalMatrix {
        let n = self.ncols();
        let mut rows = self.data.clone();
        let pivots = row_reduce(&mut rows, n);
        let is_pivot: Vec<bool> = (0..n).map(|j| pivots.contains(&j)).collect();
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut basis = vec![vec![Rational::zero(); free.len()]; n];
        for (k, &f) in free.iter().enumerate() {
            basis[f][k] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                basis[p][k] = -rows[r][f].clone();
            }
        }
        RationalMatrix {
            row_names: self.col_names.clone(),
            col_names: default_names("k", free.len()),
            data: basis,
        }
    }

    /// One exact solution of `M x = rhs`, or `None` if inconsistent. Free
    /// variables are set to zero.
    pub fn solve_exact(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.nrows(), "rhs length must match row count");
        let n = self.ncols();
        let mut rows: Vec<Vec<Rational>> = self
            .data
            .iter()
            .zip(rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let pivots = row_reduce(&mut rows, n + 1);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][n].clone();
        }
        Some(x)
    }

    /// The subset of columns forming a basis of the column space (first
    /// independent columns, in order).
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut rows = self.data.clone();
        row_reduce(&mut rows, self.ncols())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?}", self.col_names)?;
        for (name, row) in self.row_names.iter().zip(&self.data) {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "{name}: [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// True if every entry is nonnegative.
pub fn is_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
