//! Batch execution over instance sets and the CSV report formats.

use std::time::Duration;

use rayon::prelude::*;

use super::rcrit::{compute_rcrit, ExpressivityReport, InstanceStatus, RcritOptions, Strategy};
use crate::cnf::CnfFormula;
use crate::solver::SolverBackend;

#[derive(Debug, Clone)]
pub struct BatchConfig {
    pub solver: SolverBackend,
    pub strategy: Strategy,
    pub workers: usize,
    /// Per-instance wall budget.
    pub timeout: Option<Duration>,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            solver: SolverBackend::embedded(),
            strategy: Strategy::LinearScan,
            workers: 1,
            timeout: None,
        }
    }
}

/// One parsed instance ready to run.
#[derive(Debug, Clone)]
pub struct BatchInstance {
    pub id: String,
    pub family: String,
    pub difficulty: String,
    pub formula: CnfFormula,
}

#[derive(Debug)]
pub struct BatchReport {
    /// Per-instance rows in input order.
    pub rows: Vec<ExpressivityReport>,
    /// Instances that could not be processed, with reasons.
    pub skipped: Vec<(String, String)>,
}

/// Runs the experiment on every instance, distributing instances over a
/// bounded worker pool. A failing instance is recorded in `skipped` and
/// never aborts the rest.
pub fn run_batch(instances: &[BatchInstance], config: &BatchConfig) -> BatchReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .expect("worker pool construction");

    let results: Vec<Result<ExpressivityReport, (String, String)>> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| {
                let options = RcritOptions {
                    instance: inst.id.clone(),
                    family: inst.family.clone(),
                    difficulty: inst.difficulty.clone(),
                    strategy: config.strategy,
                    timeout: config.timeout,
                };
                compute_rcrit(&inst.formula, &config.solver, &options)
                    .map_err(|e| (inst.id.clone(), e.to_string()))
            })
            .collect()
    });

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for result in results {
        match result {
            Ok(row) => rows.push(row),
            Err(pair) => skipped.push(pair),
        }
    }
    BatchReport { rows, skipped }
}

/// One aggregate row: either the solved instances of a (family, difficulty)
/// group, or its `unsat` (refinement-insufficient) instances, mirroring how
/// published result tables split those, or a count-only row for incomplete
/// and precheck-rejected instances.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub family: String,
    pub difficulty: String,
    pub group: &'static str,
    pub count: usize,
    pub r_crit_mean: Option<f64>,
    pub r_crit_std: Option<f64>,
    pub r_converged_mean: Option<f64>,
    pub r_converged_std: Option<f64>,
    pub n_vars_mean: f64,
    pub n_vars_std: f64,
    pub n_clauses_mean: f64,
    pub n_clauses_std: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Groups rows by (family, difficulty) and splits each group into solved /
/// unsat / incomplete / precheck_unsat aggregate rows.
pub fn aggregate_rows(rows: &[ExpressivityReport]) -> Vec<AggregateRow> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, String, u8), Vec<&ExpressivityReport>> = BTreeMap::new();
    for row in rows {
        let bucket = match row.status {
            InstanceStatus::Solved => 0u8,
            InstanceStatus::WlInsufficient => 1,
            InstanceStatus::Incomplete => 2,
            InstanceStatus::PrecheckUnsat => 3,
        };
        groups
            .entry((row.family.clone(), row.difficulty.clone(), bucket))
            .or_default()
            .push(row);
    }

    let mut out = Vec::new();
    for ((family, difficulty, bucket), members) in groups {
        let group = match bucket {
            0 => "solved",
            1 => "unsat",
            2 => "incomplete",
            _ => "precheck_unsat",
        };
        let n_vars: Vec<f64> = members.iter().map(|r| f64::from(r.n_vars)).collect();
        let n_clauses: Vec<f64> = members.iter().map(|r| r.n_clauses as f64).collect();
        let (nv_mean, nv_std) = mean_std(&n_vars);
        let (nc_mean, nc_std) = mean_std(&n_clauses);
        let (rcm, rcs) = if bucket == 0 {
            let values: Vec<f64> = members
                .iter()
                .map(|r| r.r_crit.expect("solved rows have r_crit") as f64)
                .collect();
            let (m, s) = mean_std(&values);
            (Some(m), Some(s))
        } else {
            (None, None)
        };
        let (rvm, rvs) = if bucket <= 1 {
            let values: Vec<f64> = members.iter().map(|r| r.r_converged as f64).collect();
            let (m, s) = mean_std(&values);
            (Some(m), Some(s))
        } else {
            (None, None)
        };
        out.push(AggregateRow {
            family,
            difficulty,
            group,
            count: members.len(),
            r_crit_mean: rcm,
            r_crit_std: rcs,
            r_converged_mean: rvm,
            r_converged_std: rvs,
            n_vars_mean: nv_mean,
            n_vars_std: nv_std,
            n_clauses_mean: nc_mean,
            n_clauses_std: nc_std,
        });
    }
    out
}

pub const INSTANCE_CSV_HEADER: &str =
    "instance,family,difficulty,n_vars,n_clauses,r_converged,r_crit,status,wall_ms";

pub const AGGREGATE_CSV_HEADER: &str = "family,difficulty,group,count,r_crit_mean,r_crit_std,\
     r_converged_mean,r_converged_std,n_vars_mean,n_vars_std,n_clauses_mean,n_clauses_std";

impl ExpressivityReport {
    /// One CSV row under [`INSTANCE_CSV_HEADER`]; `r_crit` stays empty when
    /// absent.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.family,
            self.difficulty,
            self.n_vars,
            self.n_clauses,
            self.r_converged,
            self.r_crit.map(|r| r.to_string()).unwrap_or_default(),
            self.status.as_str(),
            self.wall_ms
        )
    }
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.2}")).unwrap_or_default()
}

impl AggregateRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.2},{:.2},{:.2},{:.2}",
            self.family,
            self.difficulty,
            self.group,
            self.count,
            opt(self.r_crit_mean),
            opt(self.r_crit_std),
            opt(self.r_converged_mean),
            opt(self.r_converged_std),
            self.n_vars_mean,
            self.n_vars_std,
            self.n_clauses_mean,
            self.n_clauses_std
        )
    }
}
