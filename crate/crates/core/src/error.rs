use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("polyhedron is unbounded (coordinate {0} has no finite supremum)")]
    Unbounded(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("exhaustive decomposition requested for {n} elements, limit is {limit}")]
    ExhaustiveLimit { n: usize, limit: usize },
    #[error("malformed branch decomposition: {0}")]
    MalformedDecomposition(String),
    #[error("decomposition file, line {line}: {msg}")]
    DecompositionParse { line: usize, msg: String },
    #[error("variable set Q differs from the column set; reduce the polyhedron first")]
    NotReduced,
    #[error("brute-force oracle limited to {cap} columns, got {n}")]
    OracleCap { n: usize, cap: usize },
    #[error("LP region is empty")]
    EmptyRegion,
}

pub type Result<T> = std::result::Result<T, Error>;
