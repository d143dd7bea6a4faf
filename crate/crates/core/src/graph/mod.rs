//! Graph representations of CNF formulas.
//!
//! The central one is the literal-clause graph with negation connections
//! (LCN): a bipartite graph joining literal nodes to the clauses they occur
//! in, plus a perfect matching of each literal to its negation under a
//! second edge color. The LCN is lossless: [`lcn_to_formula`] reconstructs
//! the formula up to isomorphism. The lossier LCG/VCG/LIG variants are
//! provided for comparison experiments.
//!
//! Node ids are dense and deterministic: literal nodes first (in variable
//! order, positive before negative, both polarities always materialized,
//! even for polarities that never occur), then clause nodes in input order.

mod build;
mod export;
mod types;

pub use build::{
    build_lcg, build_lcn, build_lig, build_vcg, label_assignment, lcn_literal, lcn_node,
    lcn_to_formula,
};
pub use export::{parse_graph, write_graph, GraphFormatError};
pub use types::{EdgeColor, GraphError, Mark, NodeKind, NodeLabeling, SatGraph};
