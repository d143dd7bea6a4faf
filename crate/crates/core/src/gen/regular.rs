//! Rewriting a 3-SAT formula into 3-regular form: every clause exactly three
//! literals, every literal in exactly three clauses.
//!
//! Three equisatisfiability-preserving rewrites compose into
//! [`make_3_regular`]:
//!
//! 1. [`pad_clauses_to_3`] widens short clauses with the identity
//!    (x ∨ y) ⟺ (x ∨ y ∨ z) ∧ (x ∨ y ∨ ¬z) over a fresh z.
//! 2. [`reduce_literal_degree`] splits overused variables into one copy per
//!    occurrence, chained by an implication cycle that forces all copies
//!    equal.
//! 3. [`regularize_to_3`] tops up literals that occur fewer than three
//!    times, three deficit slots at a time, with a closed nine-clause block
//!    over four fresh variables whose auxiliary literals all occur exactly
//!    three times.
//!
//! Each step keeps the original variable ids, so restricting a model of the
//! output to the original variables yields exactly the models of the input.

use super::base::GenError;
use crate::cnf::{Clause, CnfFormula, Literal};

fn check_3sat(f: &CnfFormula) -> Result<(), GenError> {
    if let Some(c) = f.clauses().iter().find(|c| c.len() > 3) {
        return Err(GenError::InvalidInput(format!(
            "expected a 3-SAT formula, found a clause of width {}",
            c.len()
        )));
    }
    Ok(())
}

/// Widens every clause to exactly three literals, preserving clause order;
/// each widening burns one fresh variable. Input must be 3-SAT.
pub fn pad_clauses_to_3(f: &CnfFormula) -> Result<CnfFormula, GenError> {
    check_3sat(f)?;
    let mut next_var = f.num_vars();
    let mut out: Vec<Clause> = Vec::with_capacity(f.num_clauses());
    for clause in f.clauses() {
        let mut stack = vec![clause.clone()];
        while let Some(c) = stack.pop() {
            if c.len() >= 3 {
                out.push(c);
                continue;
            }
            next_var += 1;
            let z = Literal::positive(next_var);
            let mut with_z = c.literals().to_vec();
            with_z.push(z);
            let mut with_not_z = c.literals().to_vec();
            with_not_z.push(z.negated());
            // Push in reverse so the positive-z branch expands first.
            stack.push(Clause::new(with_not_z).expect("nonempty"));
            stack.push(Clause::new(with_z).expect("nonempty"));
        }
    }
    Ok(CnfFormula::new(next_var, out).expect("fresh variables tracked"))
}

/// Splits every variable whose positive or negative literal occurs more than
/// `delta` times into one fresh copy per occurrence (the first occurrence
/// keeps the original id), tied together by the implication cycle
/// (x₁ ∨ ¬x₂)(x₂ ∨ ¬x₃)…(xₛ ∨ ¬x₁). For `delta ≥ 3` each cycle clause is
/// widened to three literals on the spot, which leaves the copies at literal
/// degree three; at `delta = 2` the cycle clauses stay binary, since widening
/// them would push the copies back above the bound.
pub fn reduce_literal_degree(f: &CnfFormula, delta: usize) -> Result<CnfFormula, GenError> {
    if delta < 2 {
        return Err(GenError::InvalidInput(
            "degree reduction needs delta >= 2".to_string(),
        ));
    }
    check_3sat(f)?;

    let degrees = f.literal_degrees();
    let needs_split = |var: u32| -> bool {
        let pos = degrees[Literal::positive(var).index()];
        let neg = degrees[Literal::negative(var).index()];
        pos.max(neg) > delta
    };

    let mut next_var = f.num_vars();
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    let mut cycle_clauses: Vec<Clause> = Vec::new();

    for var in 1..=f.num_vars() {
        if !needs_split(var) {
            continue;
        }
        // One copy per occurrence, in clause order; the first reuses `var`.
        // A tautological clause holds the variable twice and consumes two
        // copies (the cycle makes them equal, so the clause stays a
        // tautology in spirit).
        let mut copies: Vec<u32> = Vec::new();
        for clause in clauses.iter_mut() {
            let occurrence_positions: Vec<usize> = clause
                .literals()
                .iter()
                .enumerate()
                .filter(|(_, l)| l.var() == var)
                .map(|(i, _)| i)
                .collect();
            if occurrence_positions.is_empty() {
                continue;
            }
            let mut lits = clause.literals().to_vec();
            for pos in occurrence_positions {
                let copy = if copies.is_empty() {
                    var
                } else {
                    next_var += 1;
                    next_var
                };
                copies.push(copy);
                lits[pos] = if lits[pos].is_positive() {
                    Literal::positive(copy)
                } else {
                    Literal::negative(copy)
                };
            }
            *clause = Clause::new(lits).expect("nonempty");
        }
        // Equality cycle over the copies.
        let s = copies.len();
        for i in 0..s {
            let head = Literal::positive(copies[i]);
            let tail = Literal::negative(copies[(i + 1) % s]);
            if delta >= 3 {
                next_var += 1;
                let z = Literal::positive(next_var);
                cycle_clauses.push(Clause::new(vec![head, tail, z]).expect("nonempty"));
                cycle_clauses.push(Clause::new(vec![head, tail, z.negated()]).expect("nonempty"));
            } else {
                cycle_clauses.push(Clause::new(vec![head, tail]).expect("nonempty"));
            }
        }
    }

    clauses.extend(cycle_clauses);
    Ok(CnfFormula::new(next_var, clauses).expect("fresh variables tracked"))
}

/// Degree/size audit for the 3-regular format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityAudit {
    pub literal_degrees_all_3: bool,
    pub clause_sizes_all_3: bool,
}

impl RegularityAudit {
    pub fn of(f: &CnfFormula) -> Self {
        RegularityAudit {
            literal_degrees_all_3: f.literal_degrees().iter().all(|&d| d == 3),
            clause_sizes_all_3: f.clauses().iter().all(|c| c.len() == 3),
        }
    }

    pub fn is_3_regular(&self) -> bool {
        self.literal_degrees_all_3 && self.clause_sizes_all_3
    }
}

/// The nine-clause deficit block: gives each of `l1, l2, l3` one extra
/// occurrence. The four auxiliary variables occur exactly three times per
/// polarity, every clause has width three, and setting a = b = c = true
/// satisfies the whole block no matter what else holds.
fn deficit_block(l1: Literal, l2: Literal, l3: Literal, next_var: &mut u32) -> Vec<Clause> {
    let a = Literal::positive(*next_var + 1);
    let b = Literal::positive(*next_var + 2);
    let c = Literal::positive(*next_var + 3);
    let d = Literal::positive(*next_var + 4);
    *next_var += 4;
    let mk = |x: Literal, y: Literal, z: Literal| Clause::new(vec![x, y, z]).expect("nonempty");
    vec![
        mk(l1, a, b.negated()),
        mk(l2, a.negated(), c),
        mk(l3, b, c.negated()),
        mk(a, c.negated(), d),
        mk(a, c.negated(), d.negated()),
        mk(b, a.negated(), d),
        mk(b, a.negated(), d.negated()),
        mk(c, b.negated(), d),
        mk(c, b.negated(), d.negated()),
    ]
}

/// Tops a formula up to exactly-3 literal degrees and exactly-3 clause
/// widths.
///
/// Expects literal degrees and clause widths of at most three. Short clauses
/// are widened first (this can bump the degree of their literals, which is
/// rejected; run [`reduce_literal_degree`] after padding, or use
/// [`make_3_regular`], to avoid that). The remaining occurrence deficits are
/// always a multiple of three and are filled three at a time with
/// [`deficit_block`]s.
pub fn regularize_to_3(f: &CnfFormula) -> Result<CnfFormula, GenError> {
    check_3sat(f)?;
    if let Some(d) = f.literal_degrees().iter().find(|&&d| d > 3) {
        return Err(GenError::InvalidInput(format!(
            "literal degree {d} exceeds 3; reduce degrees first"
        )));
    }

    let padded = pad_clauses_to_3(f)?;
    if let Some(idx) = padded.literal_degrees().iter().position(|&d| d > 3) {
        return Err(GenError::InvalidInput(format!(
            "widening short clauses pushed literal {} above degree 3; \
             reduce degrees after padding instead",
            Literal::from_index(idx)
        )));
    }

    let mut next_var = padded.num_vars();
    let mut clauses = padded.clauses().to_vec();
    let degrees = padded.literal_degrees();
    let mut slots: Vec<Literal> = Vec::new();
    for (idx, &d) in degrees.iter().enumerate() {
        for _ in d..3 {
            slots.push(Literal::from_index(idx));
        }
    }
    debug_assert_eq!(slots.len() % 3, 0, "deficit total is a multiple of 3");
    for triple in slots.chunks(3) {
        clauses.extend(deficit_block(
            triple[0],
            triple[1],
            triple[2],
            &mut next_var,
        ));
    }
    let out = CnfFormula::new(next_var, clauses).expect("fresh variables tracked");
    debug_assert!(RegularityAudit::of(&out).is_3_regular());
    Ok(out)
}

/// Full pipeline from any 3-SAT formula to an equisatisfiable 3-regular one:
/// widen short clauses, split overused variables at bound three, then fill
/// occurrence deficits. Padding precedes the degree reduction because
/// widening a clause bumps its literals' degrees; running it after the
/// reduction could push them back over the bound.
pub fn make_3_regular(f: &CnfFormula) -> Result<CnfFormula, GenError> {
    let padded = pad_clauses_to_3(f)?;
    let reduced = reduce_literal_degree(&padded, 3)?;
    regularize_to_3(&reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_models, brute_force_sat};

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

    fn equisatisfiable(a: &CnfFormula, b: &CnfFormula) -> bool {
        // Brute force where feasible, the complete embedded solver beyond
        // the cap (rewrites can grow well past 30 variables).
        let is_sat = |f: &CnfFormula| match brute_force_sat(f, Some(30)) {
            Ok(outcome) => outcome.is_sat(),
            Err(_) => {
                crate::solver::solve_embedded(f, &crate::solver::Budget::UNLIMITED).verdict
                    == crate::solver::Verdict::Sat
            }
        };
        is_sat(a) == is_sat(b)
    }

    #[test]
    fn padding_makes_all_clauses_width_3() {
        let f = formula(2, &[&[1], &[1, -2]]);
        let padded = pad_clauses_to_3(&f).unwrap();
        assert!(padded.clauses().iter().all(|c| c.len() == 3));
        // Unit clause → 4 widened clauses, binary clause → 2.
        assert_eq!(padded.num_clauses(), 6);
        assert!(equisatisfiable(&f, &padded));
    }

    #[test]
    fn padding_rejects_wide_clauses() {
        let f = formula(4, &[&[1, 2, 3, 4]]);
        assert!(matches!(
            pad_clauses_to_3(&f),
            Err(GenError::InvalidInput(_))
        ));
    }

    #[test]
    fn formula_within_bound_is_unchanged() {
        let f = formula(3, &[&[1, 2, 3], &[-1, 2], &[1, -3]]);
        assert_eq!(reduce_literal_degree(&f, 3).unwrap(), f);
    }

    #[test]
    fn dense_formula_is_brought_below_bound() {
        // x1 positive in five clauses.
        let f = formula(
            6,
            &[
                &[1, 2, 3],
                &[1, -2, 4],
                &[1, -3, 5],
                &[1, -4, 6],
                &[1, -5, -6],
            ],
        );
        for delta in [2usize, 3] {
            let reduced = reduce_literal_degree(&f, delta).unwrap();
            let max_degree = reduced.literal_degrees().into_iter().max().unwrap();
            assert!(max_degree <= delta, "delta={delta}, got {max_degree}");
            assert!(equisatisfiable(&f, &reduced), "delta={delta}");
        }
    }

    #[test]
    fn reduction_preserves_projected_models() {
        let f = formula(3, &[&[1, 2], &[1, -2], &[1, 3], &[1, -3]]);
        let reduced = reduce_literal_degree(&f, 2).unwrap();
        let original_models = brute_force_models(&f, None).unwrap();
        let mask = (1u64 << f.num_vars()) - 1;
        let mut projected: Vec<u64> = brute_force_models(&reduced, Some(30))
            .unwrap()
            .into_iter()
            .map(|m| m & mask)
            .collect();
        projected.sort_unstable();
        projected.dedup();
        assert_eq!(projected, original_models);
    }

    #[test]
    fn tautological_clause_splits_into_two_copies() {
        let f = formula(1, &[&[1, -1], &[1], &[1], &[1]]);
        let reduced = reduce_literal_degree(&f, 2).unwrap();
        assert!(reduced.literal_degrees().into_iter().max().unwrap() <= 2);
        assert!(equisatisfiable(&f, &reduced));
    }

    #[test]
    fn deficit_block_is_satisfied_by_abc_true() {
        let mut next_var = 1;
        let l = Literal::positive(1);
        let block = deficit_block(l, l, l, &mut next_var);
        assert_eq!(block.len(), 9);
        let f = CnfFormula::new(next_var, block).unwrap();
        // a=b=c=1 regardless of l and d.
        for l_value in [false, true] {
            for d_value in [false, true] {
                let sigma = crate::cnf::PartialAssignment::from_pairs([
                    (1, l_value),
                    (2, true),
                    (3, true),
                    (4, true),
                    (5, d_value),
                ]);
                assert!(f.is_satisfied_by(&sigma));
            }
        }
    }

    #[test]
    fn regularize_rejects_high_degrees() {
        let f = formula(2, &[&[1, 2], &[1, -2], &[1], &[1, 2], &[-1, -2]]);
        assert!(matches!(
            regularize_to_3(&f),
            Err(GenError::InvalidInput(_))
        ));
    }

    #[test]
    fn full_pipeline_produces_3_regular_equisatisfiable_output() {
        let samples = [
            formula(3, &[&[1, 2, 3], &[-1, -2, -3]]),
            formula(2, &[&[1], &[-1, 2]]),
            formula(4, &[&[1, 2], &[1, 3], &[1, 4], &[1, -2], &[-1, -3]]),
            formula(1, &[&[1], &[-1]]), // unsatisfiable input
        ];
        for f in samples {
            let regular = make_3_regular(&f).unwrap();
            assert!(RegularityAudit::of(&regular).is_3_regular());
            assert!(equisatisfiable(&f, &regular));
        }
    }
}
