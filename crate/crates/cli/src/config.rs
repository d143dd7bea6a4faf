//! Run configuration: defaults, overridden by a `key=value` config file,
//! overridden by command-line flags. Every run with an output directory
//! writes its resolved configuration next to the outputs.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use satwl_core::cnf::InstanceMeta;
use satwl_core::harness::Strategy;
use satwl_core::solver::{Budget, ExternalSolverConfig, SolverBackend};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Embedded,
    External,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub solver: SolverKind,
    pub solver_cmd: Option<String>,
    pub timeout_secs: Option<u64>,
    pub workers: usize,
    pub seed: u64,
    pub tuple_budget: Option<usize>,
    pub strategy: Strategy,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            solver: SolverKind::Embedded,
            solver_cmd: None,
            timeout_secs: None,
            workers: 1,
            seed: 0,
            tuple_budget: None,
            strategy: Strategy::LinearScan,
            out: None,
        }
    }
}

impl RunConfig {
    /// Applies a `key=value` config file on top of the defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let map: InstanceMeta = text
            .parse()
            .map_err(|e| anyhow::anyhow!("parsing config {}: {e}", path.display()))?;
        let mut config = RunConfig::default();
        if let Some(v) = map.get("solver") {
            config.solver = match v {
                "embedded" => SolverKind::Embedded,
                "external" => SolverKind::External,
                other => anyhow::bail!("config: unknown solver {other:?}"),
            };
        }
        if let Some(v) = map.get("solver_cmd") {
            config.solver_cmd = Some(v.to_string());
        }
        if let Some(v) = map.get("timeout_secs") {
            config.timeout_secs = Some(v.parse().context("config: timeout_secs")?);
        }
        if let Some(v) = map.get("workers") {
            config.workers = v.parse().context("config: workers")?;
        }
        if let Some(v) = map.get("seed") {
            config.seed = v.parse().context("config: seed")?;
        }
        if let Some(v) = map.get("tuple_budget") {
            config.tuple_budget = Some(v.parse().context("config: tuple_budget")?);
        }
        if let Some(v) = map.get("strategy") {
            config.strategy = match v {
                "linear" => Strategy::LinearScan,
                "binary" => Strategy::BinarySearch,
                other => anyhow::bail!("config: unknown strategy {other:?}"),
            };
        }
        if let Some(v) = map.get("out") {
            config.out = Some(PathBuf::from(v));
        }
        Ok(config)
    }

    pub fn timeout(&self) -> Option<Duration> {
        self.timeout_secs.map(Duration::from_secs)
    }

    /// The solving backend this configuration describes.
    pub fn backend(&self) -> Result<SolverBackend> {
        match self.solver {
            SolverKind::Embedded => Ok(SolverBackend::Embedded {
                budget: Budget {
                    max_decisions: None,
                    max_wall: self.timeout(),
                },
            }),
            SolverKind::External => {
                let command = self
                    .solver_cmd
                    .clone()
                    .context("--solver external requires --solver-cmd")?;
                Ok(SolverBackend::External {
                    config: ExternalSolverConfig {
                        command,
                        timeout: self.timeout(),
                    },
                })
            }
        }
    }

    /// Serialized resolved settings, written next to run outputs.
    pub fn resolved_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "solver={}\n",
            match self.solver {
                SolverKind::Embedded => "embedded",
                SolverKind::External => "external",
            }
        ));
        if let Some(cmd) = &self.solver_cmd {
            out.push_str(&format!("solver_cmd={cmd}\n"));
        }
        if let Some(t) = self.timeout_secs {
            out.push_str(&format!("timeout_secs={t}\n"));
        }
        out.push_str(&format!("workers={}\n", self.workers));
        out.push_str(&format!("seed={}\n", self.seed));
        if let Some(b) = self.tuple_budget {
            out.push_str(&format!("tuple_budget={b}\n"));
        }
        out.push_str(&format!(
            "strategy={}\n",
            match self.strategy {
                Strategy::LinearScan => "linear",
                Strategy::BinarySearch => "binary",
            }
        ));
        if let Some(out_dir) = &self.out {
            out.push_str(&format!("out={}\n", out_dir.display()));
        }
        out
    }
}
