//! Exact vertex enumeration for polyhedra `P = {x : Sx = b, x >= 0}`.
//!
//! The enumeration runs bottom-up over a branch decomposition of the linear
//! matroid spanned by the columns of `S`. Every node of the decomposition is a
//! column subset whose image `S_A x_A` is confined to a low-dimensional affine
//! space (a *k-module*); minimal feasible faces of the children are combined
//! and filtered at each node until the root yields the vertices.
//!
//! All arithmetic is exact over the rationals.

pub mod branchdec;
pub mod colset;
pub mod error;
pub mod faceenum;
pub mod kmodule;
pub mod lpexact;
pub mod matroid;
pub mod oracle;
pub mod ratmat;

pub use branchdec::{decompose, width_of, BranchDecomposition, ModNode, ModTree, Strategy};
pub use colset::ColSet;
pub use error::{Error, Result};
pub use faceenum::{enumerate_vertices, EnumerationReport, Face, VertexSet};
pub use kmodule::{ModuleInterface, PolyhedronSpec, Reduction};
pub use lpexact::{Bound, LpOutcome, LpProblem, VarKind};
pub use matroid::LinearMatroid;
pub use ratmat::{format_rational, parse_rational, Rational, RationalMatrix};
