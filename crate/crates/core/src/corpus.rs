//! Small named formulas used as shared test vectors.

use crate::cnf::{Clause, CnfFormula};

fn formula(num_vars: u32, clauses: &[&[i32]]) -> CnfFormula {
    CnfFormula::new(
        num_vars,
        clauses
            .iter()
            .map(|ints| Clause::from_dimacs(ints).unwrap())
            .collect(),
    )
    .unwrap()
}

/// Three variables chained by an equality and two xor constraints:
/// x1 = x3, x1 ⊗ x2, x2 ⊗ x3. Satisfiable, exactly by (1,0,1) and (0,1,0).
/// Every literal occurs in exactly two clauses.
pub fn xor_triangle() -> CnfFormula {
    formula(
        3,
        &[&[-1, 3], &[1, 2], &[-1, -2], &[2, 3], &[-2, -3], &[1, -3]],
    )
}

/// A pair of formulas whose literal-clause graphs (without negation
/// connections) are isomorphic even though the first is satisfiable and the
/// second is not. Distinguishing them requires the negation matching.
pub fn lcg_twin_pair() -> (CnfFormula, CnfFormula) {
    let f = formula(
        3,
        &[&[1, -3], &[1, 2], &[2, 3], &[3, -1], &[-1, -2], &[-2, -3]],
    );
    let f_prime = formula(
        3,
        &[&[1, -3], &[1, 2], &[2, 3], &[3, -2], &[-2, -1], &[-1, -3]],
    );
    (f, f_prime)
}
