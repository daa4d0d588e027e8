//! Exact branch-and-reduce solver for dominating induced matchings.
//!
//! A dominating induced matching of a graph is a set `F` of edges such that
//! every vertex not covered by `F` is isolated from the other uncovered
//! vertices and every covered vertex has exactly one covered neighbor.
//! [`solve`] decides existence or finds a minimum/maximum-weight one; the
//! result always carries a certificate checked by [`oracle::verify`].

pub mod analysis;
pub mod branch;
pub mod cli;
pub mod error;
pub mod format;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod reduce;
pub mod solve;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Vertex, Weight};
pub use instance::{Instance, Label};
pub use solve::{solve, solve_with, Mode, Solution, SolveOptions, SolveStats};
