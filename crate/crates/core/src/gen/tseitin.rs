//! Parity formulas over graphs.
//!
//! Every edge carries a variable; every vertex constrains the parity of its
//! incident edge variables to match a 0/1 charge. The CNF expansion of one
//! parity constraint on d edges forbids each of the 2^(d-1) wrong-parity
//! sign patterns. The formula is satisfiable exactly when the total charge
//! is even, which makes the family a cheap source of certified instances.

use super::base::{BaseGraph, GenError};
use crate::cnf::{Clause, CnfFormula, Literal};

/// Cap on vertex degree; a degree-d vertex expands to 2^(d-1) clauses.
pub const TSEITIN_DEGREE_CAP: usize = 10;

/// A 0/1 charge per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeFunction {
    charges: Vec<bool>,
}

impl ChargeFunction {
    pub fn new(charges: Vec<bool>) -> Self {
        ChargeFunction { charges }
    }

    pub fn zero(num_nodes: usize) -> Self {
        ChargeFunction {
            charges: vec![false; num_nodes],
        }
    }

    /// Charges from the low bits of `bits`: vertex i charged iff bit i set.
    pub fn from_bits(bits: u64, num_nodes: usize) -> Self {
        ChargeFunction {
            charges: (0..num_nodes).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn charge(&self, v: usize) -> bool {
        self.charges[v]
    }

    pub fn total_is_even(&self) -> bool {
        self.charges.iter().filter(|&&c| c).count() % 2 == 0
    }

    pub fn to_csv(&self) -> String {
        self.charges
            .iter()
            .map(|&c| if c { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Builds the parity formula of `g` under the given charges.
///
/// Edge i (in normalized edge order) gets variable i+1. Vertex constraints
/// are emitted in vertex order, clauses within one constraint in ascending
/// sign-pattern order. Satisfiable iff the charge sum is even.
pub fn build_tseitin(g: &BaseGraph, charges: &ChargeFunction) -> Result<CnfFormula, GenError> {
    if charges.len() != g.num_nodes() {
        return Err(GenError::ChargeSizeMismatch {
            given: charges.len(),
            expected: g.num_nodes(),
        });
    }
    let degrees = g.degrees();
    if let Some(v) = (0..g.num_nodes()).find(|&v| degrees[v] > TSEITIN_DEGREE_CAP) {
        return Err(GenError::DegreeCapExceeded {
            degree: degrees[v],
            cap: TSEITIN_DEGREE_CAP,
        });
    }

    // Incident edge variables per vertex.
    let mut incident: Vec<Vec<u32>> = vec![Vec::new(); g.num_nodes()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(i as u32 + 1);
        incident[v].push(i as u32 + 1);
    }

    let mut clauses = Vec::new();
    for (v, vars) in incident.iter().enumerate() {
        let d = vars.len();
        if d == 0 {
            if charges.charge(v) {
                // An empty sum can never be odd; the constraint is an
                // unsatisfiable constant with no clause form.
                return Err(GenError::IsolatedChargedVertex { vertex: v });
            }
            continue;
        }
        // Forbid every assignment of the incident variables whose parity
        // disagrees with the charge: the clause negates that assignment.
        let want_odd = charges.charge(v);
        for pattern in 0u32..(1 << d) {
            let parity_odd = pattern.count_ones() % 2 == 1;
            if parity_odd == want_odd {
                continue; // satisfying pattern, nothing to forbid
            }
            let lits: Vec<Literal> = vars
                .iter()
                .enumerate()
                .map(|(i, &var)| {
                    if pattern >> i & 1 == 1 {
                        Literal::negative(var)
                    } else {
                        Literal::positive(var)
                    }
                })
                .collect();
            clauses.push(Clause::new(lits).expect("d >= 1"));
        }
    }
    Ok(CnfFormula::new(g.num_edges() as u32, clauses).expect("edge variables in range"))
}
