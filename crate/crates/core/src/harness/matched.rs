//! Desk-scale search for indistinguishability-preserving partial
//! assignments.
//!
//! Given two formulas whose LCNs refinement cannot tell apart and a partial
//! assignment σ on the first, higher-order indistinguishability implies some
//! assignment σ̃ of equally many variables of the second exists whose marked
//! LCN stays refinement-indistinguishable from the marked LCN of the first.
//! This module finds such a σ̃ by exhaustive search over variable subsets and
//! value patterns, which is feasible for the pair sizes used in tests.

use super::HarnessError;
use crate::cnf::{CnfFormula, PartialAssignment};
use crate::graph::{build_lcn, label_assignment};
use crate::wl::wl_distinguish_labeled;

/// Default cap on the number of candidate assignments tried.
pub const MATCHED_SEARCH_CAP: u64 = 1_000_000;

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut result = 1u128;
    for i in 0..k.min(n - k) {
        result = result * u128::from(n - i) / u128::from(i + 1);
    }
    result
}

/// Enumerates k-subsets of 1..=n in lexicographic order.
struct Subsets {
    n: u32,
    current: Option<Vec<u32>>,
}

impl Subsets {
    fn new(n: u32, k: usize) -> Self {
        let current = if k as u32 > n {
            None
        } else {
            Some((1..=k as u32).collect())
        };
        Subsets { n, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.current.clone()?;
        let k = current.len();
        let mut next = current.clone();
        // Advance the rightmost position that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - 1 - i) as u32 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(current)
    }
}

/// Searches for a partial assignment σ̃ of `g` with as many bound variables
/// as `sigma` such that the marked LCNs of (f, σ) and (g, σ̃) are
/// indistinguishable to refinement. Returns the first hit in deterministic
/// (variable subset, value pattern) order, or `None` when no candidate
/// works. Candidates beyond `cap` (default [`MATCHED_SEARCH_CAP`]) are a
/// refusal.
pub fn find_matched_assignment(
    f: &CnfFormula,
    g: &CnfFormula,
    sigma: &PartialAssignment,
    cap: Option<u64>,
) -> Result<Option<PartialAssignment>, HarnessError> {
    let cap = cap.unwrap_or(MATCHED_SEARCH_CAP);
    let t = sigma.len();
    let candidates = binomial(u64::from(g.num_vars()), t as u64) * (1u128 << t);
    if candidates > u128::from(cap) {
        return Err(HarnessError::SearchCapExceeded { candidates, cap });
    }

    let lcn_f = build_lcn(f);
    let lcn_g = build_lcn(g);
    let labels_f = label_assignment(&lcn_f, sigma).expect("sigma binds variables of f");

    for vars in Subsets::new(g.num_vars(), t) {
        for pattern in 0u64..(1 << t) {
            let candidate = PartialAssignment::from_pairs(
                vars.iter()
                    .enumerate()
                    .map(|(i, &v)| (v, pattern >> i & 1 == 1)),
            );
            let labels_g =
                label_assignment(&lcn_g, &candidate).expect("candidate binds variables of g");
            let verdict = wl_distinguish_labeled(&lcn_f, Some(&labels_f), &lcn_g, Some(&labels_g));
            if !verdict.is_distinguished() {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}
