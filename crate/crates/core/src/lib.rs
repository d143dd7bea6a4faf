//! Tooling for studying how much structural resolution the Weisfeiler-Leman
//! (WL) color refinement algorithm has on Boolean satisfiability instances.
//!
//! The crate provides:
//!
//! * a canonical CNF data model with DIMACS I/O and desk-scale oracles
//!   ([`cnf`]),
//! * graph representations of formulas, chiefly the literal-clause graph
//!   with negation connections ([`graph`]),
//! * 1-WL and k-WL refinement engines with pairwise distinguishability
//!   tests ([`wl`]),
//! * generators for instance families with provable ground truth: gadget
//!   pairs that WL cannot tell apart, parity formulas over graphs,
//!   3-regular formulas, random 3-SAT at the satisfiability threshold,
//!   clique-cover extractions from literal-incidence graphs ([`gen`]),
//! * a complete embedded SAT solver plus a bridge to external DIMACS
//!   solvers ([`solver`]),
//! * the literal-equality expressivity harness computing `r_crit` and
//!   `r_converged` per instance ([`harness`]).
//!
//! # Example
//!
//! Build the gadget pair over K4 — two formulas the WL test cannot tell
//! apart although exactly one of them is satisfiable — and check both
//! facts:
//!
//! ```
//! use satwl_core::gen::{build_cfi_pair, BaseGraph};
//! use satwl_core::graph::build_lcn;
//! use satwl_core::solver::{solve_embedded, Budget, Verdict};
//! use satwl_core::wl::wl_distinguish;
//!
//! let (plain, twisted) = build_cfi_pair(&BaseGraph::complete(4)).unwrap();
//!
//! let verdict = wl_distinguish(
//!     &build_lcn(plain.formula()),
//!     &build_lcn(twisted.formula()),
//! );
//! assert!(!verdict.is_distinguished());
//!
//! let sat = solve_embedded(plain.formula(), &Budget::UNLIMITED);
//! let unsat = solve_embedded(twisted.formula(), &Budget::UNLIMITED);
//! assert_eq!(sat.verdict, Verdict::Sat);
//! assert_eq!(unsat.verdict, Verdict::Unsat);
//! ```

pub mod cnf;
pub mod corpus;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod solver;
pub mod wl;

pub use cnf::{Clause, CnfFormula, Literal, PartialAssignment, Residual};
pub use graph::{EdgeColor, NodeKind, NodeLabeling, SatGraph};
pub use solver::{SolveResult, Verdict};
pub use wl::{Coloring, WlRun};
