//! Canonical CNF data model, DIMACS I/O and small-scale oracles.
//!
//! Clauses are sets of literals stored in a canonical sorted form, so formula
//! equality and hashing are structural. Tautological clauses are kept (they
//! change the graph representations under study) and emptiness arising from
//! assignments is represented only by the explicit [`Residual::Unsat`]
//! marker, never as an empty clause.

mod dimacs;
mod meta;
mod oracle;
mod types;

pub use dimacs::{parse_dimacs, write_dimacs, write_dimacs_to, DimacsError};
pub use meta::{InstanceMeta, MetaError};
pub use oracle::{
    brute_force_models, brute_force_sat, formulas_isomorphic, BruteForceOutcome, OracleError,
};
pub use types::{Clause, CnfError, CnfFormula, Literal, PartialAssignment, Residual};

/// Default variable cap for [`brute_force_sat`].
pub const BRUTE_FORCE_VAR_CAP: u32 = 26;

/// Default variable cap for [`formulas_isomorphic`].
pub const ISOMORPHISM_VAR_CAP: u32 = 8;
