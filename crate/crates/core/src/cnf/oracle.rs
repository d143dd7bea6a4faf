//! Desk-scale oracles: exhaustive satisfiability and formula isomorphism.
//!
//! Both are reference implementations used to validate everything else in
//! the crate. They are deliberately exhaustive, with explicit variable caps
//! so they can never silently hang on an oversized input.

use std::collections::HashMap;

use thiserror::Error;

use super::types::{CnfFormula, Literal, PartialAssignment};
use super::{BRUTE_FORCE_VAR_CAP, ISOMORPHISM_VAR_CAP};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("formula has {num_vars} variables, above the oracle cap {cap}")]
    VarCapExceeded { num_vars: u32, cap: u32 },
}

/// Outcome of the exhaustive satisfiability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceOutcome {
    /// Satisfiable, with a total model (the lexicographically first one).
    Sat(PartialAssignment),
    Unsat,
}

impl BruteForceOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteForceOutcome::Sat(_))
    }

    pub fn model(&self) -> Option<&PartialAssignment> {
        match self {
            BruteForceOutcome::Sat(m) => Some(m),
            BruteForceOutcome::Unsat => None,
        }
    }
}

/// Per-clause bit masks over a ≤64-variable universe; assignment `m`
/// satisfies the clause iff it hits a positive literal or misses a negative
/// one.
fn clause_masks(f: &CnfFormula) -> Vec<(u64, u64)> {
    f.clauses()
        .iter()
        .map(|c| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for lit in c.literals() {
                let bit = 1u64 << (lit.var() - 1);
                if lit.is_positive() {
                    pos |= bit;
                } else {
                    neg |= bit;
                }
            }
            (pos, neg)
        })
        .collect()
}

fn check_cap(f: &CnfFormula, cap: u32) -> Result<(), OracleError> {
    if f.num_vars() > cap {
        return Err(OracleError::VarCapExceeded {
            num_vars: f.num_vars(),
            cap,
        });
    }
    Ok(())
}

/// Exhaustive satisfiability over all `2^n` assignments.
///
/// `cap` defaults to [`BRUTE_FORCE_VAR_CAP`] when `None`. The returned model
/// (if any) is verified against every clause before being returned.
pub fn brute_force_sat(f: &CnfFormula, cap: Option<u32>) -> Result<BruteForceOutcome, OracleError> {
    let cap = cap.unwrap_or(BRUTE_FORCE_VAR_CAP);
    check_cap(f, cap)?;
    let masks = clause_masks(f);
    let n = f.num_vars();
    for bits in 0u64..(1u64 << n) {
        if masks
            .iter()
            .all(|&(pos, neg)| pos & bits != 0 || neg & !bits != 0)
        {
            let model = PartialAssignment::from_bits(bits, n);
            debug_assert!(f.is_satisfied_by(&model));
            return Ok(BruteForceOutcome::Sat(model));
        }
    }
    Ok(BruteForceOutcome::Unsat)
}

/// All satisfying assignments as bit masks (bit `v-1` is variable `v`).
pub fn brute_force_models(f: &CnfFormula, cap: Option<u32>) -> Result<Vec<u64>, OracleError> {
    let cap = cap.unwrap_or(BRUTE_FORCE_VAR_CAP);
    check_cap(f, cap)?;
    let masks = clause_masks(f);
    Ok((0u64..(1u64 << f.num_vars()))
        .filter(|&bits| {
            masks
                .iter()
                .all(|&(pos, neg)| pos & bits != 0 || neg & !bits != 0)
        })
        .collect())
}

/// Exhaustive formula isomorphism.
///
/// Searches for a bijection of occurring literals that commutes with
/// negation wherever both polarities occur and maps the clause multiset of
/// `f` onto that of `g`. Backtracking over literal images with occurrence
/// degrees as the pruning invariant; `cap` (default
/// [`ISOMORPHISM_VAR_CAP`]) bounds the variable count of both formulas.
pub fn formulas_isomorphic(
    f: &CnfFormula,
    g: &CnfFormula,
    cap: Option<u32>,
) -> Result<bool, OracleError> {
    let cap = cap.unwrap_or(ISOMORPHISM_VAR_CAP);
    check_cap(f, cap)?;
    check_cap(g, cap)?;

    if f.num_clauses() != g.num_clauses() {
        return Ok(false);
    }
    let f_lits: Vec<Literal> = f.occurring_literals().into_iter().collect();
    let g_lits: Vec<Literal> = g.occurring_literals().into_iter().collect();
    if f_lits.len() != g_lits.len() {
        return Ok(false);
    }

    // Cheap global invariants: clause-size and literal-degree multisets.
    let mut f_sizes: Vec<usize> = f.clauses().iter().map(|c| c.len()).collect();
    let mut g_sizes: Vec<usize> = g.clauses().iter().map(|c| c.len()).collect();
    f_sizes.sort_unstable();
    g_sizes.sort_unstable();
    if f_sizes != g_sizes {
        return Ok(false);
    }
    let f_deg: HashMap<Literal, usize> = f_lits.iter().map(|&l| (l, f.literal_degree(l))).collect();
    let g_deg: HashMap<Literal, usize> = g_lits.iter().map(|&l| (l, g.literal_degree(l))).collect();
    let mut f_deg_hist: Vec<usize> = f_deg.values().copied().collect();
    let mut g_deg_hist: Vec<usize> = g_deg.values().copied().collect();
    f_deg_hist.sort_unstable();
    g_deg_hist.sort_unstable();
    if f_deg_hist != g_deg_hist {
        return Ok(false);
    }

    // Multiset of g's clauses, decremented as f-clauses become fully mapped.
    let mut g_clause_counts: HashMap<Vec<Literal>, usize> = HashMap::new();
    for c in g.clauses() {
        *g_clause_counts.entry(c.literals().to_vec()).or_default() += 1;
    }

    struct Search<'a> {
        f: &'a CnfFormula,
        f_lits: Vec<Literal>,
        g_lits: Vec<Literal>,
        f_deg: HashMap<Literal, usize>,
        g_deg: HashMap<Literal, usize>,
        mapping: HashMap<Literal, Literal>,
        used: HashMap<Literal, bool>,
        // Per f-clause: number of still-unmapped literals.
        unmapped: Vec<usize>,
        // f-clause indices containing each literal.
        occurs: HashMap<Literal, Vec<usize>>,
        g_clause_counts: HashMap<Vec<Literal>, usize>,
    }

    impl Search<'_> {
        fn solve(&mut self, depth: usize) -> bool {
            if depth == self.f_lits.len() {
                return true;
            }
            let lit = self.f_lits[depth];
            let forced = self.mapping.get(&lit.negated()).map(|&m| m.negated());
            let candidates: Vec<Literal> = match forced {
                Some(c) => vec![c],
                None => self.g_lits.clone(),
            };
            for cand in candidates {
                if !self.g_deg.contains_key(&cand)
                    || *self.used.get(&cand).unwrap_or(&false)
                    || self.g_deg[&cand] != self.f_deg[&lit]
                {
                    continue;
                }
                if self.try_assign(lit, cand, depth) {
                    return true;
                }
            }
            false
        }

        fn image_of(&self, clause_idx: usize) -> Vec<Literal> {
            let mut image: Vec<Literal> = self.f.clauses()[clause_idx]
                .literals()
                .iter()
                .map(|l| self.mapping[l])
                .collect();
            image.sort_unstable();
            image.dedup();
            image
        }

        fn try_assign(&mut self, lit: Literal, cand: Literal, depth: usize) -> bool {
            self.mapping.insert(lit, cand);
            self.used.insert(cand, true);
            // Complete any clause whose last literal was just mapped, and
            // consume its image from g's multiset.
            let clause_ids = self.occurs[&lit].clone();
            let mut decremented: Vec<usize> = Vec::new();
            let mut consumed: Vec<Vec<Literal>> = Vec::new();
            let mut ok = true;
            for &ci in &clause_ids {
                self.unmapped[ci] -= 1;
                decremented.push(ci);
                if self.unmapped[ci] == 0 {
                    let image = self.image_of(ci);
                    match self.g_clause_counts.get_mut(&image) {
                        Some(count) if *count > 0 => {
                            *count -= 1;
                            consumed.push(image);
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            let found = ok && self.solve(depth + 1);
            if !found {
                for image in consumed {
                    *self.g_clause_counts.get_mut(&image).unwrap() += 1;
                }
                for ci in decremented {
                    self.unmapped[ci] += 1;
                }
                self.mapping.remove(&lit);
                self.used.insert(cand, false);
            }
            found
        }
    }

    let mut occurs: HashMap<Literal, Vec<usize>> = HashMap::new();
    for (i, c) in f.clauses().iter().enumerate() {
        for &l in c.literals() {
            occurs.entry(l).or_default().push(i);
        }
    }
    let unmapped: Vec<usize> = f.clauses().iter().map(|c| c.len()).collect();

    let mut search = Search {
        f,
        f_lits,
        g_lits,
        f_deg,
        g_deg,
        mapping: HashMap::new(),
        used: HashMap::new(),
        unmapped,
        occurs,
        g_clause_counts,
    };
    Ok(search.solve(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::types::Clause;

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
    fn contradiction_is_unsat() {
        let f = formula(1, &[&[1], &[-1]]);
        assert_eq!(brute_force_sat(&f, None).unwrap(), BruteForceOutcome::Unsat);
    }

    #[test]
    fn empty_formula_is_sat() {
        let f = CnfFormula::empty(3);
        assert!(brute_force_sat(&f, None).unwrap().is_sat());
    }

    #[test]
    fn cap_is_enforced() {
        let f = CnfFormula::empty(30);
        assert_eq!(
            brute_force_sat(&f, None),
            Err(OracleError::VarCapExceeded {
                num_vars: 30,
                cap: BRUTE_FORCE_VAR_CAP
            })
        );
        assert!(brute_force_sat(&f, Some(30)).is_ok());
    }

    #[test]
    fn formula_isomorphic_to_itself() {
        let f = formula(3, &[&[1, 2], &[-1, 3], &[-2, -3]]);
        assert!(formulas_isomorphic(&f, &f, None).unwrap());
    }

    #[test]
    fn sign_flip_of_all_occurrences_is_isomorphic() {
        // (x ∨ y) ∧ (¬x)  vs  (¬x ∨ ¬y) ∧ (x)
        let f = formula(2, &[&[1, 2], &[-1]]);
        let g = formula(2, &[&[-1, -2], &[1]]);
        assert!(formulas_isomorphic(&f, &g, None).unwrap());
    }

    #[test]
    fn different_clause_counts_are_not_isomorphic() {
        let f = formula(2, &[&[1, 2]]);
        let g = formula(2, &[&[1, -2], &[1]]);
        assert!(!formulas_isomorphic(&f, &g, None).unwrap());
    }

    #[test]
    fn single_literals_may_map_across_one_variable() {
        // {x1, x2} can map onto {w, ¬w}: negation constraints are vacuous
        // when only one polarity of each variable occurs.
        let f = formula(2, &[&[1, 2]]);
        let g = formula(1, &[&[1, -1]]);
        assert!(formulas_isomorphic(&f, &g, None).unwrap());
    }

    #[test]
    fn paired_variable_cannot_map_to_single_literals() {
        let f = formula(1, &[&[1], &[-1]]);
        let g = formula(2, &[&[1], &[2]]);
        assert!(!formulas_isomorphic(&f, &g, None).unwrap());
    }
}
