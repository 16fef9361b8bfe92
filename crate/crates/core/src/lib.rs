//! Exact -1 / 0 / +1 path reachability for digraphs whose edges carry one
//! open/close parenthesis pair.
//!
//! For every vertex pair the library decides whether a walk of cost exactly
//! -1, 0, or +1 exists, under either the Dyck rule (balanced, prefix sums
//! never negative) or the semi-Dyck rule (balanced counts). The main solver
//! encodes the three adjacency layers as powers of b = 3(n+1) and iterates
//! algebraic matrix products; a cubic closure baseline and a grammar-based
//! reachability oracle cross-check it.

pub mod agmy;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod solvers;

pub use graph::{
    label_cost, parse_graph, serialize_graph, to_tri_matrix, BoolMatrix, Label, Ldg, Mode,
    ParseError, TriMatrix,
};
pub use solvers::{
    cubic_exact_paths, flat_exact_paths, general_exact_zero_paths, pm1_reachability, solve,
    ReachResult, ZeroEdgeSet,
};
