//! A complete conflict-driven solver: two-watched-literal unit propagation,
//! first-UIP clause learning, non-chronological backjumping. Branching takes
//! the lowest-index unassigned variable, positive polarity first. Slower
//! than activity heuristics but bit-reproducible, which the experiment
//! pipeline values more. No restarts, no clause deletion.
//
// TODO: bound learned-clause growth if instances beyond the current desk
// scale ever get routed here instead of to the external bridge.

use std::time::Instant;

use super::{Budget, SolveResult, SolveStats, Verdict};
use crate::cnf::{CnfFormula, Literal, PartialAssignment};

const BUDGET_CHECK_INTERVAL: u64 = 2048;

struct Solver<'a> {
    formula: &'a CnfFormula,
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
    /// watches[l.index()]: clause indices currently watching literal l.
    watches: Vec<Vec<usize>>,
    /// assignment[var]: 0 unassigned, 1 true, -1 false.
    assignment: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Literal>,
    trail_lim: Vec<usize>,
    qhead: usize,
    stats: SolveStats,
    started: Instant,
    budget: Budget,
}

enum Loaded {
    Ok,
    TriviallyUnsat,
}

impl<'a> Solver<'a> {
    fn new(formula: &'a CnfFormula, budget: Budget) -> Self {
        let num_vars = formula.num_vars() as usize;
        Solver {
            formula,
            num_vars,
            clauses: Vec::with_capacity(formula.num_clauses()),
            watches: vec![Vec::new(); 2 * num_vars],
            assignment: vec![0; num_vars + 1],
            level: vec![0; num_vars + 1],
            reason: vec![None; num_vars + 1],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            stats: SolveStats::default(),
            started: Instant::now(),
            budget,
        }
    }

    fn value(&self, lit: Literal) -> Option<bool> {
        match self.assignment[lit.var() as usize] {
            0 => None,
            v => Some((v > 0) == lit.is_positive()),
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, lit: Literal, reason: Option<usize>) {
        debug_assert_eq!(self.value(lit), None);
        let var = lit.var() as usize;
        self.assignment[var] = if lit.is_positive() { 1 } else { -1 };
        self.level[var] = self.decision_level();
        self.reason[var] = reason;
        self.trail.push(lit);
    }

    fn load_clauses(&mut self) -> Loaded {
        for clause in self.formula.clauses() {
            let lits = clause.literals().to_vec();
            let idx = self.clauses.len();
            if lits.len() >= 2 {
                self.watches[lits[0].index()].push(idx);
                self.watches[lits[1].index()].push(idx);
                self.clauses.push(lits);
            } else {
                let unit = lits[0];
                self.clauses.push(lits);
                match self.value(unit) {
                    Some(false) => return Loaded::TriviallyUnsat,
                    Some(true) => {}
                    None => self.enqueue(unit, Some(idx)),
                }
            }
        }
        Loaded::Ok
    }

    /// Propagates until fixpoint; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.negated();
            let watchers = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            while i < watchers.len() {
                let ci = watchers[i];
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == Some(true) {
                    self.watches[false_lit.index()].push(ci);
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    if self.value(self.clauses[ci][k]) != Some(false) {
                        self.clauses[ci].swap(1, k);
                        let new_watch = self.clauses[ci][1];
                        self.watches[new_watch.index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    i += 1;
                    continue;
                }
                // Unit under the current assignment, or conflicting.
                self.watches[false_lit.index()].push(ci);
                if self.value(first) == Some(false) {
                    for &cj in &watchers[i + 1..] {
                        self.watches[false_lit.index()].push(cj);
                    }
                    return Some(ci);
                }
                self.enqueue(first, Some(ci));
                i += 1;
            }
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut conflict: usize) -> (Vec<Literal>, u32) {
        let current = self.decision_level();
        let mut learned: Vec<Literal> = vec![Literal::positive(1)]; // placeholder
        let mut seen = vec![false; self.num_vars + 1];
        let mut path_count = 0usize;
        let mut index = self.trail.len();
        let mut skip_first = false;

        loop {
            let clause = &self.clauses[conflict];
            for &q in &clause[usize::from(skip_first)..] {
                let var = q.var() as usize;
                if !seen[var] && self.level[var] > 0 {
                    seen[var] = true;
                    if self.level[var] >= current {
                        path_count += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            // Next marked literal on the trail.
            loop {
                index -= 1;
                if seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let p = self.trail[index];
            seen[p.var() as usize] = false;
            path_count -= 1;
            if path_count == 0 {
                learned[0] = p.negated();
                break;
            }
            conflict = self.reason[p.var() as usize].expect("non-decision literals carry reasons");
            skip_first = true;
        }

        // Backjump to the second-highest level in the clause; put a literal
        // of that level in the second watch position.
        let mut backjump = 0u32;
        if learned.len() > 1 {
            let mut max_pos = 1;
            for (pos, lit) in learned.iter().enumerate().skip(1) {
                if self.level[lit.var() as usize] > self.level[learned[max_pos].var() as usize] {
                    max_pos = pos;
                }
                let _ = lit;
            }
            learned.swap(1, max_pos);
            backjump = self.level[learned[1].var() as usize];
        }
        (learned, backjump)
    }

    fn backtrack(&mut self, level: u32) {
        while self.trail.len() > self.trail_lim[level as usize] {
            let lit = self.trail.pop().unwrap();
            let var = lit.var() as usize;
            self.assignment[var] = 0;
            self.reason[var] = None;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn out_of_budget(&self) -> bool {
        if let Some(max) = self.budget.max_decisions {
            if self.stats.decisions >= max {
                return true;
            }
        }
        if let Some(max) = self.budget.max_wall {
            if self.started.elapsed() >= max {
                return true;
            }
        }
        false
    }

    fn finish(&mut self, verdict: Verdict, model: Option<PartialAssignment>) -> SolveResult {
        self.stats.wall = self.started.elapsed();
        SolveResult::new(verdict, model, self.stats, "embedded")
    }

    fn run(&mut self) -> SolveResult {
        if matches!(self.load_clauses(), Loaded::TriviallyUnsat) {
            return self.finish(Verdict::Unsat, None);
        }
        let mut since_budget_check = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return self.finish(Verdict::Unsat, None);
                }
                let (learned, backjump) = self.analyze(conflict);
                self.backtrack(backjump);
                let idx = self.clauses.len();
                let assert_lit = learned[0];
                if learned.len() >= 2 {
                    self.watches[learned[0].index()].push(idx);
                    self.watches[learned[1].index()].push(idx);
                    self.clauses.push(learned);
                    self.enqueue(assert_lit, Some(idx));
                } else {
                    self.clauses.push(learned);
                    self.enqueue(assert_lit, None);
                }
                since_budget_check += 1;
                if since_budget_check >= BUDGET_CHECK_INTERVAL {
                    since_budget_check = 0;
                    if self.out_of_budget() {
                        return self.finish(Verdict::Unknown, None);
                    }
                }
                continue;
            }

            if self.trail.len() == self.num_vars {
                let model = PartialAssignment::from_pairs(
                    (1..=self.num_vars as u32).map(|v| (v, self.assignment[v as usize] > 0)),
                );
                assert!(
                    self.formula.is_satisfied_by(&model),
                    "internal error: model failed verification"
                );
                return self.finish(Verdict::Sat, Some(model));
            }

            if self.out_of_budget() {
                return self.finish(Verdict::Unknown, None);
            }

            // Decide: lowest-index unassigned variable, positive first.
            let var = (1..=self.num_vars as u32)
                .find(|&v| self.assignment[v as usize] == 0)
                .expect("some variable is unassigned");
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.enqueue(Literal::positive(var), None);
        }
    }
}

/// Complete search over the formula within the budget. Deterministic:
/// identical inputs and budgets yield identical verdicts, models and
/// statistics (wall time aside).
pub fn solve_embedded(f: &CnfFormula, budget: &Budget) -> SolveResult {
    Solver::new(f, *budget).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, Clause};
    use crate::corpus;

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

    #[test]
    fn unit_propagation_chain() {
        let f = formula(2, &[&[1], &[-1, 2]]);
        let result = solve_embedded(&f, &Budget::UNLIMITED);
        assert_eq!(result.verdict, Verdict::Sat);
        let model = result.model.unwrap();
        assert_eq!(model.get(1), Some(true));
        assert_eq!(model.get(2), Some(true));
        assert_eq!(result.stats.decisions, 0);
    }

    #[test]
    fn empty_formula_is_sat_with_total_model() {
        let result = solve_embedded(&CnfFormula::empty(3), &Budget::UNLIMITED);
        assert_eq!(result.verdict, Verdict::Sat);
        assert!(result.model.unwrap().is_total(3));
    }

    #[test]
    fn contradictory_units_are_unsat() {
        let f = formula(1, &[&[1], &[-1]]);
        assert_eq!(
            solve_embedded(&f, &Budget::UNLIMITED).verdict,
            Verdict::Unsat
        );
    }

    #[test]
    fn xor_triangle_model_is_the_lexicographically_guided_one() {
        let f = corpus::xor_triangle();
        let result = solve_embedded(&f, &Budget::UNLIMITED);
        assert_eq!(result.verdict, Verdict::Sat);
        assert!(f.is_satisfied_by(result.model.as_ref().unwrap()));
    }

    #[test]
    fn twin_pair_verdicts_match_the_oracle() {
        let (f, f_prime) = corpus::lcg_twin_pair();
        assert_eq!(solve_embedded(&f, &Budget::UNLIMITED).verdict, Verdict::Sat);
        assert_eq!(
            solve_embedded(&f_prime, &Budget::UNLIMITED).verdict,
            Verdict::Unsat
        );
    }

    #[test]
    fn tautological_clauses_are_harmless() {
        let f = formula(2, &[&[1, -1], &[2]]);
        assert_eq!(solve_embedded(&f, &Budget::UNLIMITED).verdict, Verdict::Sat);
    }

    #[test]
    fn agreement_with_brute_force_on_random_instances() {
        use crate::gen::{random_3sat, THRESHOLD_MULTIPLIER};
        for seed in 0..60 {
            let f = random_3sat(14, THRESHOLD_MULTIPLIER, seed).unwrap();
            let expected = brute_force_sat(&f, None).unwrap().is_sat();
            let result = solve_embedded(&f, &Budget::UNLIMITED);
            assert_eq!(result.verdict == Verdict::Sat, expected, "seed {seed}");
            if let Some(model) = &result.model {
                assert!(f.is_satisfied_by(model));
            }
        }
    }

    #[test]
    fn decision_budget_gives_unknown() {
        use crate::gen::{random_3sat, THRESHOLD_MULTIPLIER};
        let f = random_3sat(60, THRESHOLD_MULTIPLIER, 3).unwrap();
        let budget = Budget {
            max_decisions: Some(1),
            max_wall: None,
        };
        let result = solve_embedded(&f, &budget);
        assert_eq!(result.verdict, Verdict::Unknown);
        assert!(result.model.is_none());
    }

    #[test]
    fn statistics_are_deterministic() {
        use crate::gen::{random_3sat, THRESHOLD_MULTIPLIER};
        let f = random_3sat(30, THRESHOLD_MULTIPLIER, 11).unwrap();
        let a = solve_embedded(&f, &Budget::UNLIMITED);
        let b = solve_embedded(&f, &Budget::UNLIMITED);
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.stats.decisions, b.stats.decisions);
        assert_eq!(a.stats.propagations, b.stats.propagations);
        assert_eq!(a.stats.conflicts, b.stats.conflicts);
    }
}
