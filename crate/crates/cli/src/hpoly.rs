//! The polyhedron file format.
//!
//! ```text
//! 2 3
//! # cols: a b c
//! 1 1 0
//! 0 1 -1/2
//! b: 1 0
//! ```
//!
//! Blank lines and other `#` lines are ignored.

use std::fmt;

use bwenum_core::ratmat::{format_rational, parse_rational};
use bwenum_core::{PolyhedronSpec, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyFile {
    pub s: RationalMatrix,
    pub b: Vec<Rational>,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

fn rationals(line: usize, tokens: &[&str]) -> Result<Vec<Rational>, ParseError> {
    tokens
        .iter()
        .map(|t| parse_rational(t).or_else(|_| err(line, format!("not a rational: `{t}`"))))
        .collect()
}

impl HPolyFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let Some((ln, header)) = lines.next() else {
            return err(1, "empty input");
        };
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [m, n] = dims[..] else {
            return err(ln, "expected header `m n`");
        };
        let (Ok(m), Ok(n)) = (m.parse::<usize>(), n.parse::<usize>()) else {
            return err(ln, "header must hold two nonnegative integers");
        };

        let mut names: Option<Vec<String>> = None;
        let mut rows = Vec::with_capacity(m);
        let mut b = None;
        let mut last = ln;
        for (ln, line) in lines {
            last = ln;
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(cols) = rest.trim_start().strip_prefix("cols:") {
                    if names.is_some() || !rows.is_empty() {
                        return err(ln, "column names must precede the rows");
                    }
                    let cols: Vec<String> = cols.split_whitespace().map(str::to_string).collect();
                    if cols.len() != n {
                        return err(ln, format!("{} column names for {n} columns", cols.len()));
                    }
                    names = Some(cols);
                }
                continue;
            }
            if b.is_some() {
                return err(ln, "unexpected content after the `b:` line");
            }
            if let Some(rest) = line.strip_prefix("b:") {
                if rows.len() != m {
                    return err(
                        ln,
                        format!("found {} rows before `b:`, header says {m}", rows.len()),
                    );
                }
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() != m {
                    return err(
                        ln,
                        format!("`b:` has {} entries, expected {m}", tokens.len()),
                    );
                }
                b = Some(rationals(ln, &tokens)?);
                continue;
            }
            if rows.len() == m {
                return err(ln, format!("more than {m} rows"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n {
                return err(
                    ln,
                    format!("row has {} entries, expected {n}", tokens.len()),
                );
            }
            rows.push(rationals(ln, &tokens)?);
        }
        let Some(b) = b else {
            return err(last, "missing `b:` line");
        };
        let s = RationalMatrix::from_rows(n, rows).or_else(|e| err(1, e.to_string()))?;
        let s = match names {
            Some(names) => s.with_col_names(names).or_else(|e| err(1, e.to_string()))?,
            None => s,
        };
        Ok(HPolyFile { s, b })
    }

    pub fn polyhedron(&self) -> PolyhedronSpec {
        PolyhedronSpec::new(self.s.clone(), self.b.clone()).expect("lengths checked while parsing")
    }

    /// Inverse of [`HPolyFile::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {}\n# cols: {}\n",
            self.s.nrows(),
            self.s.ncols(),
            self.s.col_names().join(" ")
        );
        for row in self.s.rows() {
            out.push_str(
                &row.iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            out.push('\n');
        }
        out.push_str("b: ");
        out.push_str(
            &self
                .b
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
        out
    }
}
