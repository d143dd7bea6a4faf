//! The literal-equality expressivity experiment.
//!
//! For a satisfiable formula f, refinement on its LCN partitions the literal
//! nodes after each round. Constraining all literals of one class to the
//! same truth value (an implication cycle per class) gives the augmented
//! formula f_r for round r. A refinement-bounded predictor can only emit a
//! satisfying assignment if some f_r is satisfiable; `r_crit` is the
//! smallest such round, `r_converged` the round where the partition
//! stabilizes. Instances whose every f_r is unsatisfiable are recorded as
//! beyond the expressive power of plain refinement.

mod batch;
mod matched;
mod rcrit;

pub use batch::{
    aggregate_rows, run_batch, AggregateRow, BatchConfig, BatchInstance, BatchReport,
    AGGREGATE_CSV_HEADER, INSTANCE_CSV_HEADER,
};
pub use matched::{find_matched_assignment, MATCHED_SEARCH_CAP};
pub use rcrit::{
    compute_rcrit, solve_all_rounds, ExpressivityReport, InstanceStatus, RcritOptions, Strategy,
};

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::graph::lcn_literal;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("partition must cover every literal of the formula exactly once: {0}")]
    BadPartition(String),
    #[error("matched-assignment search space {candidates} exceeds the cap {cap}")]
    SearchCapExceeded { candidates: u128, cap: u64 },
    #[error("round {0} was never solved")]
    RoundNotSolved(usize),
}

/// A formula plus the equality constraints of one literal partition.
#[derive(Debug, Clone)]
pub struct AugmentedFormula {
    base: CnfFormula,
    classes: Vec<Vec<Literal>>,
    /// Added clauses, grouped per class (empty group for singletons).
    added: Vec<Vec<Clause>>,
}

impl AugmentedFormula {
    pub fn base(&self) -> &CnfFormula {
        &self.base
    }

    pub fn classes(&self) -> &[Vec<Literal>] {
        &self.classes
    }

    pub fn added_clause_count(&self) -> usize {
        self.added.iter().map(Vec::len).sum()
    }

    /// Materializes f_r: the base clauses followed by the equality cycles in
    /// class order.
    pub fn formula(&self) -> CnfFormula {
        let mut clauses = self.base.clauses().to_vec();
        for group in &self.added {
            clauses.extend(group.iter().cloned());
        }
        CnfFormula::new(self.base.num_vars(), clauses)
            .expect("equality clauses use existing variables")
    }

    /// True iff the model gives every class a uniform truth value.
    pub fn model_respects_classes(&self, model: &crate::cnf::PartialAssignment) -> bool {
        self.classes.iter().all(|class| {
            let mut values = class.iter().map(|&l| model.value_of(l));
            match values.next() {
                None | Some(None) => class.is_empty(),
                Some(first) => values.all(|v| v == first && v.is_some()),
            }
        })
    }
}

/// Converts a literal-node partition (as produced by
/// [`crate::wl::literal_partition`]) into literal classes.
pub fn literal_classes_of_nodes(partition: &[Vec<usize>]) -> Vec<Vec<Literal>> {
    partition
        .iter()
        .map(|class| class.iter().map(|&n| lcn_literal(n)).collect())
        .collect()
}

/// Builds f ∧ ⋀ⱼ gⱼ where gⱼ forces all literals of class j equal via the
/// implication cycle (¬ℓₙ ∨ ℓ₁) ∧ ⋀ᵢ (¬ℓᵢ ∨ ℓᵢ₊₁). Singleton classes add
/// nothing and no new variables are ever introduced.
///
/// The partition must cover both polarities of every variable exactly once;
/// class members are sorted ascending before the cycle is laid down, so the
/// output is deterministic however the classes were discovered.
pub fn augment(
    f: &CnfFormula,
    partition: &[Vec<Literal>],
) -> Result<AugmentedFormula, HarnessError> {
    let expected = 2 * f.num_vars() as usize;
    let mut seen = vec![false; expected];
    let mut covered = 0usize;
    for class in partition {
        for &lit in class {
            if lit.var() > f.num_vars() {
                return Err(HarnessError::BadPartition(format!(
                    "literal {lit} is outside the formula's {} variables",
                    f.num_vars()
                )));
            }
            if seen[lit.index()] {
                return Err(HarnessError::BadPartition(format!(
                    "literal {lit} appears in two classes"
                )));
            }
            seen[lit.index()] = true;
            covered += 1;
        }
    }
    if covered != expected {
        return Err(HarnessError::BadPartition(format!(
            "{covered} literals covered, formula has {expected}"
        )));
    }

    let mut classes: Vec<Vec<Literal>> = partition.to_vec();
    for class in &mut classes {
        class.sort_unstable();
    }
    classes.sort_unstable_by_key(|class| class[0]);

    let mut added: Vec<Vec<Clause>> = Vec::with_capacity(classes.len());
    for class in &classes {
        if class.len() < 2 {
            added.push(Vec::new());
            continue;
        }
        let n = class.len();
        let mut cycle = Vec::with_capacity(n);
        cycle.push(Clause::new(vec![class[n - 1].negated(), class[0]]).expect("nonempty"));
        for i in 0..n - 1 {
            cycle.push(Clause::new(vec![class[i].negated(), class[i + 1]]).expect("nonempty"));
        }
        added.push(cycle);
    }

    Ok(AugmentedFormula {
        base: f.clone(),
        classes,
        added,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, PartialAssignment};

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

    fn lit(x: i32) -> Literal {
        Literal::from_dimacs(x).unwrap()
    }

    #[test]
    fn all_singletons_add_nothing() {
        let f = formula(2, &[&[1, 2]]);
        let partition = vec![vec![lit(1)], vec![lit(-1)], vec![lit(2)], vec![lit(-2)]];
        let augmented = augment(&f, &partition).unwrap();
        assert_eq!(augmented.added_clause_count(), 0);
        assert_eq!(augmented.formula(), f);
    }

    #[test]
    fn class_with_a_literal_and_its_negation_is_contradictory() {
        let f = formula(1, &[&[1]]);
        let partition = vec![vec![lit(1), lit(-1)]];
        let augmented = augment(&f, &partition).unwrap();
        let fr = augmented.formula();
        assert!(!brute_force_sat(&fr, None).unwrap().is_sat());
    }

    #[test]
    fn equality_classes_force_equal_values() {
        // {x1, x2} on (x1 ∨ x2): satisfiable with both true.
        let f = formula(2, &[&[1, 2]]);
        let partition = vec![vec![lit(1), lit(2)], vec![lit(-1), lit(-2)]];
        let augmented = augment(&f, &partition).unwrap();
        let fr = augmented.formula();
        let outcome = brute_force_sat(&fr, None).unwrap();
        let model = outcome.model().unwrap();
        assert_eq!(model.get(1), Some(true));
        assert_eq!(model.get(2), Some(true));
        assert!(augmented.model_respects_classes(model));
        let non_uniform = PartialAssignment::from_pairs([(1, true), (2, false)]);
        assert!(!augmented.model_respects_classes(&non_uniform));
    }

    #[test]
    fn cycle_layout_matches_the_definition() {
        let f = formula(2, &[&[1, 2]]);
        let partition = vec![vec![lit(2), lit(1)], vec![lit(-1), lit(-2)]];
        let augmented = augment(&f, &partition).unwrap();
        // Class {1, 2} sorted ascending: wrap clause (¬2 ∨ 1) then (¬1 ∨ 2).
        assert_eq!(
            augmented.added[0][0],
            Clause::from_dimacs(&[-2, 1]).unwrap()
        );
        assert_eq!(
            augmented.added[0][1],
            Clause::from_dimacs(&[-1, 2]).unwrap()
        );
    }

    #[test]
    fn partition_must_cover_exactly() {
        let f = formula(2, &[&[1, 2]]);
        assert!(matches!(
            augment(&f, &[vec![lit(1)]]),
            Err(HarnessError::BadPartition(_))
        ));
        let doubled = vec![
            vec![lit(1), lit(1)],
            vec![lit(-1)],
            vec![lit(2)],
            vec![lit(-2)],
        ];
        assert!(matches!(
            augment(&f, &doubled),
            Err(HarnessError::BadPartition(_))
        ));
        let foreign = vec![
            vec![lit(1)],
            vec![lit(-1)],
            vec![lit(2)],
            vec![lit(-2)],
            vec![lit(3)],
        ];
        assert!(matches!(
            augment(&f, &foreign),
            Err(HarnessError::BadPartition(_))
        ));
    }
}
