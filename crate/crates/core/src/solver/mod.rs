//! Satisfiability backends: a small complete embedded solver and a bridge
//! to external DIMACS solvers.
//!
//! Every satisfiable verdict leaving this module carries a model that has
//! been checked against the full clause set. UNKNOWN is a first-class
//! verdict reserved for budget or timeout exhaustion.

mod embedded;
mod external;

use std::time::Duration;

pub use embedded::solve_embedded;
pub use external::{solve_external, ExternalError, ExternalSolverConfig};

use crate::cnf::{CnfFormula, PartialAssignment};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    External(#[from] ExternalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Search/time budget for the embedded solver.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_decisions: Option<u64>,
    pub max_wall: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_decisions: None,
        max_wall: None,
    };

    pub fn with_wall(timeout: Duration) -> Budget {
        Budget {
            max_decisions: None,
            max_wall: Some(timeout),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub verdict: Verdict,
    /// Present and verified exactly when the verdict is SAT.
    pub model: Option<PartialAssignment>,
    pub stats: SolveStats,
    pub engine: &'static str,
    /// Captured context for UNKNOWN verdicts from the external bridge.
    pub diagnostics: Option<String>,
}

impl SolveResult {
    pub(crate) fn new(
        verdict: Verdict,
        model: Option<PartialAssignment>,
        stats: SolveStats,
        engine: &'static str,
    ) -> Self {
        SolveResult {
            verdict,
            model,
            stats,
            engine,
            diagnostics: None,
        }
    }
}

/// A configured solving backend the harness can call repeatedly.
#[derive(Debug, Clone)]
pub enum SolverBackend {
    Embedded { budget: Budget },
    External { config: ExternalSolverConfig },
}

impl SolverBackend {
    pub fn embedded() -> Self {
        SolverBackend::Embedded {
            budget: Budget::UNLIMITED,
        }
    }

    /// The same backend with the wall budget replaced.
    pub fn with_wall(&self, timeout: Option<Duration>) -> Self {
        match self {
            SolverBackend::Embedded { budget } => SolverBackend::Embedded {
                budget: Budget {
                    max_wall: timeout,
                    ..*budget
                },
            },
            SolverBackend::External { config } => SolverBackend::External {
                config: ExternalSolverConfig {
                    timeout,
                    ..config.clone()
                },
            },
        }
    }

    pub fn solve(&self, f: &CnfFormula) -> Result<SolveResult, SolverError> {
        match self {
            SolverBackend::Embedded { budget } => Ok(solve_embedded(f, budget)),
            SolverBackend::External { config } => Ok(solve_external(f, config)?),
        }
    }
}
