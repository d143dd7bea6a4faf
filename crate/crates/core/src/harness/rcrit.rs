use std::time::{Duration, Instant};

use super::{augment, literal_classes_of_nodes, HarnessError};
use crate::cnf::CnfFormula;
use crate::graph::build_lcn;
use crate::solver::{SolveStats, SolverBackend, SolverError, Verdict};
use crate::wl::{literal_partition, wl_refine};

/// How to search for the smallest satisfiable round.
///
/// Rounds only refine the partition, so the equality constraints weaken as
/// `r` grows and satisfiability is upward-closed in `r`, which is what
/// makes the binary search sound. The linear scan from round 1 matches the
/// experimental procedure exactly and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LinearScan,
    BinarySearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceStatus {
    /// `r_crit` was found.
    Solved,
    /// Every augmented round is unsatisfiable: refinement-bounded predictors
    /// cannot emit a satisfying assignment for this instance.
    WlInsufficient,
    /// A required solver call returned UNKNOWN; nothing was guessed.
    Incomplete,
    /// The raw instance failed the satisfiability precheck.
    PrecheckUnsat,
}

impl InstanceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceStatus::Solved => "solved",
            InstanceStatus::WlInsufficient => "wl_insufficient",
            InstanceStatus::Incomplete => "incomplete",
            InstanceStatus::PrecheckUnsat => "precheck_unsat",
        }
    }
}

/// Per-instance record of the experiment.
#[derive(Debug, Clone)]
pub struct ExpressivityReport {
    pub instance: String,
    pub family: String,
    pub difficulty: String,
    pub n_vars: u32,
    pub n_clauses: usize,
    pub r_converged: usize,
    pub r_crit: Option<usize>,
    pub status: InstanceStatus,
    /// Verdict of every round that was actually solved, ascending by round.
    pub round_verdicts: Vec<(usize, Verdict)>,
    pub solver_stats: SolveStats,
    pub wall_ms: u128,
}

impl ExpressivityReport {
    pub fn verdict_of_round(&self, round: usize) -> Option<Verdict> {
        self.round_verdicts
            .iter()
            .find(|&&(r, _)| r == round)
            .map(|&(_, v)| v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RcritOptions {
    pub instance: String,
    pub family: String,
    pub difficulty: String,
    pub strategy: Strategy,
    /// Wall budget for the whole instance (precheck plus every round).
    pub timeout: Option<Duration>,
}

struct InstanceClock {
    started: Instant,
    deadline: Option<Instant>,
}

impl InstanceClock {
    fn new(timeout: Option<Duration>) -> Self {
        let started = Instant::now();
        InstanceClock {
            started,
            deadline: timeout.map(|t| started + t),
        }
    }

    /// Backend limited to the remaining instance budget; `None` when the
    /// budget is exhausted.
    fn constrain(&self, backend: &SolverBackend) -> Option<SolverBackend> {
        match self.deadline {
            None => Some(backend.clone()),
            Some(deadline) => {
                let remaining = deadline.saturating_duration_since(Instant::now());
                if remaining.is_zero() {
                    None
                } else {
                    Some(backend.with_wall(Some(remaining)))
                }
            }
        }
    }
}

/// Runs the full experiment on one satisfiable instance: precheck, LCN
/// refinement for `r_converged`, then per-round solves for `r_crit` with the
/// chosen strategy. Rounds beyond `r_converged` are never solved (the
/// partition no longer changes, so those formulas are all equal to the last
/// one).
pub fn compute_rcrit(
    f: &CnfFormula,
    solver: &SolverBackend,
    options: &RcritOptions,
) -> Result<ExpressivityReport, SolverError> {
    let clock = InstanceClock::new(options.timeout);
    let mut stats = SolveStats::default();
    let mut round_verdicts: Vec<(usize, Verdict)> = Vec::new();

    let report = |status: InstanceStatus,
                  r_converged: usize,
                  r_crit: Option<usize>,
                  round_verdicts: Vec<(usize, Verdict)>,
                  stats: SolveStats| {
        ExpressivityReport {
            instance: options.instance.clone(),
            family: options.family.clone(),
            difficulty: options.difficulty.clone(),
            n_vars: f.num_vars(),
            n_clauses: f.num_clauses(),
            r_converged,
            r_crit,
            status,
            round_verdicts,
            solver_stats: stats,
            wall_ms: clock.started.elapsed().as_millis(),
        }
    };

    // Satisfiability precheck of the raw instance.
    let precheck = match clock.constrain(solver) {
        Some(backend) => backend.solve(f)?,
        None => {
            return Ok(report(
                InstanceStatus::Incomplete,
                0,
                None,
                round_verdicts,
                stats,
            ));
        }
    };
    accumulate(&mut stats, &precheck.stats);
    match precheck.verdict {
        Verdict::Unsat => {
            return Ok(report(
                InstanceStatus::PrecheckUnsat,
                0,
                None,
                round_verdicts,
                stats,
            ));
        }
        Verdict::Unknown => {
            return Ok(report(
                InstanceStatus::Incomplete,
                0,
                None,
                round_verdicts,
                stats,
            ));
        }
        Verdict::Sat => {}
    }

    let lcn = build_lcn(f);
    let run = wl_refine(&lcn, None);
    let r_converged = run
        .converged_round()
        .expect("uncapped refinement converges");

    let solve_round = |round: usize,
                       round_verdicts: &mut Vec<(usize, Verdict)>,
                       stats: &mut SolveStats|
     -> Result<Option<Verdict>, SolverError> {
        let partition = literal_partition(&run, &lcn, round).expect("round within range");
        let classes = literal_classes_of_nodes(&partition);
        let augmented = augment(f, &classes).expect("refinement partitions are exact covers");
        let fr = augmented.formula();
        let Some(backend) = clock.constrain(solver) else {
            return Ok(None);
        };
        let result = backend.solve(&fr)?;
        accumulate(stats, &result.stats);
        round_verdicts.push((round, result.verdict));
        if result.verdict == Verdict::Sat {
            let model = result.model.as_ref().expect("SAT results carry models");
            assert!(
                augmented.model_respects_classes(model),
                "equality constraints violated by a returned model"
            );
        }
        Ok(Some(result.verdict))
    };

    let r_crit = match options.strategy {
        Strategy::LinearScan => {
            let mut found = None;
            for round in 1..=r_converged {
                match solve_round(round, &mut round_verdicts, &mut stats)? {
                    Some(Verdict::Sat) => {
                        found = Some(round);
                        break;
                    }
                    Some(Verdict::Unsat) => continue,
                    Some(Verdict::Unknown) | None => {
                        return Ok(report(
                            InstanceStatus::Incomplete,
                            r_converged,
                            None,
                            round_verdicts,
                            stats,
                        ));
                    }
                }
            }
            found
        }
        Strategy::BinarySearch => {
            // Satisfiability is monotone in the round, so bisect; every
            // probed round lands in `round_verdicts`.
            let mut lo = 1usize;
            let mut found = None;
            if r_converged > 0 {
                match solve_round(r_converged, &mut round_verdicts, &mut stats)? {
                    Some(Verdict::Sat) => {
                        found = Some(r_converged);
                        let mut hi = r_converged.saturating_sub(1);
                        while lo <= hi {
                            let mid = lo + (hi - lo) / 2;
                            match solve_round(mid, &mut round_verdicts, &mut stats)? {
                                Some(Verdict::Sat) => {
                                    found = Some(mid);
                                    hi = mid - 1;
                                }
                                Some(Verdict::Unsat) => lo = mid + 1,
                                Some(Verdict::Unknown) | None => {
                                    return Ok(report(
                                        InstanceStatus::Incomplete,
                                        r_converged,
                                        None,
                                        round_verdicts,
                                        stats,
                                    ));
                                }
                            }
                        }
                    }
                    Some(Verdict::Unsat) => {}
                    Some(Verdict::Unknown) | None => {
                        return Ok(report(
                            InstanceStatus::Incomplete,
                            r_converged,
                            None,
                            round_verdicts,
                            stats,
                        ));
                    }
                }
            }
            found
        }
    };

    round_verdicts.sort_unstable_by_key(|&(r, _)| r);
    let status = if r_crit.is_some() {
        InstanceStatus::Solved
    } else {
        InstanceStatus::WlInsufficient
    };
    Ok(report(status, r_converged, r_crit, round_verdicts, stats))
}

fn accumulate(total: &mut SolveStats, call: &SolveStats) {
    total.decisions += call.decisions;
    total.propagations += call.propagations;
    total.conflicts += call.conflicts;
    total.wall += call.wall;
}

/// Solves every round 1..=r_converged regardless of strategy; used by tests
/// checking the monotonicity of satisfiability across rounds.
pub fn solve_all_rounds(
    f: &CnfFormula,
    solver: &SolverBackend,
) -> Result<Vec<(usize, Verdict)>, HarnessError> {
    let lcn = build_lcn(f);
    let run = wl_refine(&lcn, None);
    let r_converged = run.converged_round().expect("refinement converges");
    let mut verdicts = Vec::new();
    for round in 1..=r_converged {
        let partition = literal_partition(&run, &lcn, round).expect("round within range");
        let classes = literal_classes_of_nodes(&partition);
        let fr = augment(f, &classes)
            .expect("refinement partitions are exact covers")
            .formula();
        let result = solver
            .solve(&fr)
            .map_err(|_| HarnessError::RoundNotSolved(round))?;
        verdicts.push((round, result.verdict));
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use crate::corpus;
    use crate::gen::{make_3_regular, random_3sat, THRESHOLD_MULTIPLIER};

    fn options(strategy: Strategy) -> RcritOptions {
        RcritOptions {
            instance: "test".to_string(),
            family: "test".to_string(),
            difficulty: String::new(),
            strategy,
            timeout: None,
        }
    }

    #[test]
    fn unsatisfiable_inputs_are_rejected_by_the_precheck() {
        let (_, f_prime) = corpus::lcg_twin_pair();
        let report = compute_rcrit(
            &f_prime,
            &SolverBackend::embedded(),
            &options(Strategy::LinearScan),
        )
        .unwrap();
        assert_eq!(report.status, InstanceStatus::PrecheckUnsat);
        assert_eq!(report.r_crit, None);
    }

    #[test]
    fn regular_instance_has_no_rounds_and_is_wl_insufficient() {
        // A 3-regular formula stabilizes at round 0: there are no rounds to
        // solve and the instance is beyond plain refinement by convention.
        let f = make_3_regular(
            &CnfFormula::new(
                3,
                vec![
                    Clause::from_dimacs(&[1, 2, 3]).unwrap(),
                    Clause::from_dimacs(&[-1, -2, -3]).unwrap(),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let report = compute_rcrit(
            &f,
            &SolverBackend::embedded(),
            &options(Strategy::LinearScan),
        )
        .unwrap();
        assert_eq!(report.r_converged, 0);
        assert_eq!(report.status, InstanceStatus::WlInsufficient);
        assert!(report.round_verdicts.is_empty());
    }

    #[test]
    fn strategies_agree_on_random_instances() {
        for seed in 0..8 {
            let f = random_3sat(20, THRESHOLD_MULTIPLIER, seed).unwrap();
            let linear = compute_rcrit(
                &f,
                &SolverBackend::embedded(),
                &options(Strategy::LinearScan),
            )
            .unwrap();
            let binary = compute_rcrit(
                &f,
                &SolverBackend::embedded(),
                &options(Strategy::BinarySearch),
            )
            .unwrap();
            assert_eq!(linear.r_crit, binary.r_crit, "seed {seed}");
            assert_eq!(linear.status, binary.status, "seed {seed}");
            assert_eq!(linear.r_converged, binary.r_converged, "seed {seed}");
        }
    }

    #[test]
    fn satisfiability_is_monotone_across_rounds() {
        for seed in [1u64, 4, 9] {
            let f = random_3sat(18, THRESHOLD_MULTIPLIER, seed).unwrap();
            let verdicts = solve_all_rounds(&f, &SolverBackend::embedded()).unwrap();
            let mut seen_sat = false;
            for (round, verdict) in verdicts {
                match verdict {
                    Verdict::Sat => seen_sat = true,
                    Verdict::Unsat => {
                        assert!(!seen_sat, "round {round} UNSAT after an earlier SAT round")
                    }
                    Verdict::Unknown => {}
                }
            }
        }
    }

    #[test]
    fn timeout_marks_instance_incomplete() {
        let f = random_3sat(40, THRESHOLD_MULTIPLIER, 2).unwrap();
        let mut opts = options(Strategy::LinearScan);
        opts.timeout = Some(Duration::from_nanos(1));
        let report = compute_rcrit(&f, &SolverBackend::embedded(), &opts).unwrap();
        assert_eq!(report.status, InstanceStatus::Incomplete);
    }
}
