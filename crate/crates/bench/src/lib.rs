//! Shared instance builders for the benchmark targets.

use satwl_core::cnf::CnfFormula;
use satwl_core::gen::{build_cfi_pair, random_3sat, BaseGraph, THRESHOLD_MULTIPLIER};

/// Threshold random 3-SAT instance of the given size, fixed seed.
pub fn threshold_instance(num_vars: u32) -> CnfFormula {
    random_3sat(num_vars, THRESHOLD_MULTIPLIER, 42).expect("feasible size")
}

/// The gadget pair over a random cubic base with `n` vertices.
pub fn gadget_pair(n: usize) -> (CnfFormula, CnfFormula) {
    let base = satwl_core::gen::random_regular_graph(n, 3, 7).expect("feasible");
    let (plain, twisted) = build_cfi_pair(&base).expect("valid base");
    (plain.formula().clone(), twisted.formula().clone())
}

/// A named small base graph set for generator benchmarks.
pub fn bench_bases() -> Vec<BaseGraph> {
    vec![
        BaseGraph::complete(4),
        BaseGraph::petersen(),
        BaseGraph::complete_bipartite(3, 3),
    ]
}
