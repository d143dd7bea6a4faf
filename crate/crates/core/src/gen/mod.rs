//! Instance generators.
//!
//! Every generator is a pure function of its parameters and a seed, writes
//! ground-truth satisfiability into the instance metadata whenever the
//! construction proves it, and produces clause lists in a fixed order so
//! outputs are byte-reproducible.

mod base;
mod cfi;
mod encode;
mod lig;
mod random3sat;
mod regular;
mod tseitin;

pub use base::{random_regular_graph, BaseGraph, GenError, Orientation};
pub use cfi::{
    build_cfi_pair, build_xk_gadget, cfi_model_from_orientation, even_orientation, CfiInstance,
    XK_GADGET_CAP,
};
pub use encode::encode_graph_as_cnf;
pub use lig::{extract_from_lig, random_lig};
pub use random3sat::{random_3sat, threshold_clause_count, THRESHOLD_MULTIPLIER};
pub use regular::{
    make_3_regular, pad_clauses_to_3, reduce_literal_degree, regularize_to_3, RegularityAudit,
};
pub use tseitin::{build_tseitin, ChargeFunction, TSEITIN_DEGREE_CAP};
