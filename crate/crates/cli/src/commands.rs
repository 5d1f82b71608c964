//! The three subcommands as library functions returning structured reports.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bwenum_core::branchdec::to_mod_family;
use bwenum_core::faceenum::{run, EnumOptions};
use bwenum_core::oracle::{brute_force_vertices, definitional_k_module_check};
use bwenum_core::ratmat::format_rational;
use bwenum_core::{
    decompose, BranchDecomposition, ColSet, EnumerationReport, Error, PolyhedronSpec, Rational,
    Reduction, Strategy, VertexSet,
};
use num_traits::Zero;

use crate::hpoly::HPolyFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_UNBOUNDED: i32 = 4;

/// An error together with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyPolyhedron => EXIT_EMPTY,
            Error::Unbounded(_) => EXIT_UNBOUNDED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

/// How the branch decomposition is obtained.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum DecompChoice {
    /// Exhaustive up to `--max-exhaustive` columns of `Q`, greedy beyond.
    #[default]
    Auto,
    Exhaustive,
    Greedy,
    File(PathBuf),
}

impl FromStr for DecompChoice {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "auto" => DecompChoice::Auto,
            "exhaustive" => DecompChoice::Exhaustive,
            "greedy" => DecompChoice::Greedy,
            path => DecompChoice::File(path.into()),
        })
    }
}

fn prepared(file: &HPolyFile, normalize: bool) -> Result<PolyhedronSpec, Failure> {
    let p = file.polyhedron();
    let p = if normalize { p.normalized()? } else { p };
    if p.is_empty() {
        return Err(Error::EmptyPolyhedron.into());
    }
    Ok(p)
}

fn names_of(set: &ColSet, names: &[String]) -> Vec<String> {
    set.names(names).map(str::to_string).collect()
}

fn fixed_of(red: &Reduction, names: &[String]) -> Vec<(String, Rational)> {
    red.fixed_named(names)
        .map(|(n, v)| (n.to_string(), v.clone()))
        .collect()
}

/// Decomposition of the reduced polyhedron's matroid per `choice`.
fn obtain_decomposition(
    p: &PolyhedronSpec,
    red: &Reduction,
    choice: &DecompChoice,
    max_exhaustive: usize,
) -> Result<BranchDecomposition, Failure> {
    let m = red.reduced.q_matroid()?;
    let auto = || {
        if m.ground_size() <= max_exhaustive {
            Strategy::Exhaustive
        } else {
            Strategy::Greedy
        }
    };
    let strategy = match choice {
        DecompChoice::Auto => auto(),
        DecompChoice::Exhaustive => Strategy::Exhaustive,
        DecompChoice::Greedy => Strategy::Greedy,
        DecompChoice::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            return match BranchDecomposition::parse(&text, red.reduced.col_names()) {
                Ok(d) => Ok(d),
                // a tree over every column is restricted to Q
                Err(first) => match BranchDecomposition::parse(&text, p.col_names()) {
                    Ok(full) => Ok(full.restrict(&p.variable_set()?)?),
                    Err(_) => Err(first.into()),
                },
            };
        }
    };
    Ok(decompose(m, strategy, max_exhaustive)?)
}

#[derive(Debug, Clone)]
pub struct VertexOptions {
    pub normalize: bool,
    pub decomp: DecompChoice,
    pub check: bool,
    pub allow_unbounded: bool,
    pub max_exhaustive: usize,
    pub oracle_cap: usize,
}

impl Default for VertexOptions {
    fn default() -> Self {
        VertexOptions {
            normalize: false,
            decomp: DecompChoice::Auto,
            check: false,
            allow_unbounded: false,
            max_exhaustive: 8,
            oracle_cap: bwenum_core::oracle::DEFAULT_CAP,
        }
    }
}

/// Outcome of comparing against the brute-force oracle.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub oracle_count: usize,
    /// Oracle vertices the enumeration did not report.
    pub missing: Vec<Vec<Rational>>,
    /// Reported points the oracle does not know.
    pub extra: Vec<Vec<Rational>>,
}

impl CheckOutcome {
    pub fn agrees(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VerticesReport {
    pub columns: Vec<String>,
    pub vertices: VertexSet,
    pub width: usize,
    pub k: usize,
    pub q: Vec<String>,
    pub fixed: Vec<(String, Rational)>,
    pub warnings: Vec<String>,
    pub check: Option<CheckOutcome>,
    /// Per-node data of the run over the reduced polyhedron.
    pub enumeration: EnumerationReport,
}

impl VerticesReport {
    pub fn exit_code(&self) -> i32 {
        match &self.check {
            Some(c) if !c.agrees() => EXIT_MISMATCH,
            _ => EXIT_OK,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# columns: {}\n", self.columns.join(" "));
        s += &format!("# Q: {}\n", self.q.join(" "));
        if !self.fixed.is_empty() {
            let fixed: Vec<String> = self
                .fixed
                .iter()
                .map(|(n, v)| format!("{n}={}", format_rational(v)))
                .collect();
            s += &format!("# fixed: {}\n", fixed.join(" "));
        }
        s += &format!("# width: {} k: {}\n", self.width, self.k);
        s += &format!("# vertices: {}\n", self.vertices.len());
        for v in &self.vertices {
            s += &v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect();
        let fixed: serde_json::Map<String, serde_json::Value> = self
            .fixed
            .iter()
            .map(|(n, v)| (n.clone(), format_rational(v).into()))
            .collect();
        serde_json::json!({
            "vertices": vertices,
            "width": self.width,
            "k": self.k,
            "Q": self.q,
            "fixed": fixed,
        })
    }
}

pub fn cmd_vertices(file: &HPolyFile, opts: &VertexOptions) -> Result<VerticesReport, Failure> {
    let p = prepared(file, opts.normalize)?;
    let mut warnings = Vec::new();
    // the origin is the only vertex of a cone, so its unboundedness is harmless
    let cone = p.rhs().iter().all(Zero::is_zero);
    if cone && !opts.normalize {
        warnings.push(
            "b = 0: the polyhedron is a cone whose only vertex is the origin; \
             use --normalize to enumerate its extreme rays as vertices of the slice sum(x) = 1"
                .to_string(),
        );
    }
    let allow_unbounded = opts.allow_unbounded || cone;
    if let Some(i) = p.unbounded_column()? {
        if !allow_unbounded {
            return Err(Error::Unbounded(p.col_names()[i].clone()).into());
        }
        if !cone {
            warnings.push(format!(
            "polyhedron is unbounded along {}; vertices are listed without completeness or running time guarantees",
            p.col_names()[i]
        ));
        }
    }

    let red = p.reduce()?;
    let d = obtain_decomposition(&p, &red, &opts.decomp, opts.max_exhaustive)?;
    let tree = to_mod_family(&red.reduced, &d)?;
    let enumeration = run(&red.reduced, &tree, EnumOptions { allow_unbounded })?;
    let vertices: VertexSet = enumeration.vertices.iter().map(|v| red.lift(v)).collect();

    let check = if opts.check {
        let oracle = brute_force_vertices(&p, opts.oracle_cap)?;
        Some(CheckOutcome {
            oracle_count: oracle.len(),
            missing: oracle
                .iter()
                .filter(|v| !vertices.contains(v))
                .cloned()
                .collect(),
            extra: vertices
                .iter()
                .filter(|v| !oracle.contains(v))
                .cloned()
                .collect(),
        })
    } else {
        None
    };

    Ok(VerticesReport {
        columns: p.col_names().to_vec(),
        q: names_of(&p.variable_set()?, p.col_names()),
        fixed: fixed_of(&red, p.col_names()),
        width: tree.width,
        k: tree.k,
        vertices,
        warnings,
        check,
        enumeration,
    })
}

#[derive(Debug, Clone)]
pub struct ModuleOptions {
    pub k: usize,
    pub subset: Option<Vec<String>>,
    /// Largest subset size examined when no subset is given.
    pub max_size: usize,
    pub normalize: bool,
    pub check: bool,
}

impl Default for ModuleOptions {
    fn default() -> Self {
        ModuleOptions {
            k: 0,
            subset: None,
            max_size: 2,
            normalize: false,
            check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVerdict {
    pub set: Vec<String>,
    pub is_module: bool,
    pub interface_dim: usize,
    /// Verdict of the definitional kernel check, with `--check`.
    pub definitional: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ModulesReport {
    pub k: usize,
    pub q: Vec<String>,
    pub fixed: Vec<(String, Rational)>,
    pub verdicts: Vec<ModuleVerdict>,
}

impl ModulesReport {
    pub fn mismatches(&self) -> usize {
        self.verdicts
            .iter()
            .filter(|v| v.definitional.is_some_and(|d| d != v.is_module))
            .count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatches() > 0 {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("Q: {}\n", self.q.join(" "));
        let fixed: Vec<String> = self
            .fixed
            .iter()
            .map(|(n, v)| format!("{n}={}", format_rational(v)))
            .collect();
        s += &format!(
            "fixed: {}\n",
            if fixed.is_empty() {
                "none".to_string()
            } else {
                fixed.join(" ")
            }
        );
        for v in &self.verdicts {
            let verdict = if v.is_module {
                format!("{}-module", self.k)
            } else {
                "no".into()
            };
            s += &format!(
                "{{{}}}\t{verdict}\tinterface dim {}",
                v.set.join(","),
                v.interface_dim
            );
            if let Some(d) = v.definitional {
                s += if d == v.is_module {
                    "\tcheck ok"
                } else {
                    "\tcheck MISMATCH"
                };
            }
            s.push('\n');
        }
        s
    }
}

fn subsets_up_to(n: usize, max_size: usize) -> Vec<ColSet> {
    let mut out = Vec::new();
    let mut frontier = vec![ColSet::empty(n)];
    for _ in 0..max_size.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.iter().last().map_or(0, |i| i + 1);
            for i in start..n {
                let mut t = s.clone();
                t.insert(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn cmd_modules(file: &HPolyFile, opts: &ModuleOptions) -> Result<ModulesReport, Failure> {
    let p = prepared(file, opts.normalize)?;
    let red = p.reduce()?;
    let sets = match &opts.subset {
        Some(names) => vec![p.matrix().col_set(names)?],
        None => subsets_up_to(p.ncols(), opts.max_size),
    };
    let mut verdicts = Vec::with_capacity(sets.len());
    for a in sets {
        let definitional = if opts.check {
            Some(definitional_k_module_check(
                red.reduced.matrix(),
                &p.to_q_space(&a)?,
                opts.k,
            ))
        } else {
            None
        };
        verdicts.push(ModuleVerdict {
            set: names_of(&a, p.col_names()),
            is_module: p.is_k_module(&a, opts.k)?,
            interface_dim: p.interface_dim(&a)?,
            definitional,
        });
    }
    Ok(ModulesReport {
        k: opts.k,
        q: names_of(&p.variable_set()?, p.col_names()),
        fixed: fixed_of(&red, p.col_names()),
        verdicts,
    })
}

#[derive(Debug, Clone)]
pub struct DecomposeReport {
    /// The tree in the decomposition file format, over the names of `Q`.
    pub text: String,
    pub width: usize,
    pub k: usize,
}

pub fn cmd_decompose(
    file: &HPolyFile,
    strategy: &DecompChoice,
    max_exhaustive: usize,
    normalize: bool,
) -> Result<DecomposeReport, Failure> {
    let p = prepared(file, normalize)?;
    let red = p.reduce()?;
    let d = obtain_decomposition(&p, &red, strategy, max_exhaustive)?;
    let width = bwenum_core::width_of(red.reduced.q_matroid()?, &d)?;
    Ok(DecomposeReport {
        text: d.to_text(red.reduced.col_names()),
        width,
        k: width - 1,
    })
}
