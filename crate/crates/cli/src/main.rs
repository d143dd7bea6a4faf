//! `satwl`: generate SAT instance families with known ground truth, export
//! their graph representations, run the WL distinguishability tests and the
//! literal-equality expressivity experiment.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "satwl",
    version,
    about = "WL expressivity tooling for SAT instances",
    propagate_version = true
)]
struct Cli {
    /// key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances (DIMACS plus metadata sidecar).
    Generate(GenerateArgs),
    /// Compare two instances with the WL test (exit 0 distinguished, 1
    /// indistinguishable, 2 error).
    Wl(WlArgs),
    /// Compute r_crit / r_converged per instance and aggregate (CSV).
    Rcrit(RcritArgs),
    /// Export a graph representation as an edge list.
    ExportGraph(ExportGraphArgs),
    /// Decide one instance; competition-style output, exit 10 SAT, 20
    /// UNSAT, 0 UNKNOWN.
    Solve(SolveArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// cfi | tseitin | random3sat | regular3 | lig-extract | graph-encode
    #[arg(long)]
    family: String,
    /// Base graph for cfi/tseitin/graph-encode: k4, petersen, k33, prism,
    /// k2, cycle:N, complete:N, path:N, bipartite:A:B, random3:N.
    #[arg(long)]
    base: Option<String>,
    /// Variable count for random3sat/regular3.
    #[arg(long)]
    n: Option<u32>,
    /// Clause-count multiplier for random3sat/regular3.
    #[arg(long)]
    multiplier: Option<f64>,
    /// Tseitin charges: zero | odd | random | explicit CSV like 1,0,0.
    #[arg(long)]
    charges: Option<String>,
    /// Literal-node count for lig-extract sampling.
    #[arg(long)]
    literals: Option<usize>,
    /// Edge probability for lig-extract sampling.
    #[arg(long)]
    edge_prob: Option<f64>,
    /// Extract from an exported edge-list graph instead of sampling.
    #[arg(long)]
    from_graph: Option<PathBuf>,
    /// Number of instances (seeds seed, seed+1, …) for seeded families.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Difficulty label recorded in the sidecar.
    #[arg(long)]
    difficulty: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WlArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    /// 1 for plain color refinement (default), 2..=4 for the tuple test.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    tuple_budget: Option<usize>,
    /// Dump per-round class sizes of the joint refinement to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct RcritArgs {
    /// Instance files or directories (directories are scanned for *.cnf).
    inputs: Vec<PathBuf>,
    /// embedded | external
    #[arg(long)]
    solver: Option<String>,
    /// External solver command; {input} is replaced by the DIMACS path.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Per-instance wall budget in seconds.
    #[arg(long)]
    timeout_secs: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// linear | binary
    #[arg(long)]
    strategy: Option<String>,
    /// Print the aggregate table to stdout instead of per-instance rows.
    #[arg(long)]
    aggregate: bool,
    /// Run directory for instances.csv, aggregate.csv, resolved.cfg, run.log.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportGraphArgs {
    file: PathBuf,
    /// lcn | lcg | vcg | lig
    #[arg(long)]
    repr: String,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// embedded | external
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    solver_cmd: Option<String>,
    #[arg(long)]
    timeout_secs: Option<u64>,
    #[arg(long)]
    max_decisions: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base_config = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };

    let outcome = match cli.command {
        Command::Generate(args) => commands::generate(args, base_config),
        Command::Wl(args) => commands::wl(args, base_config),
        Command::Rcrit(args) => commands::rcrit(args, base_config),
        Command::ExportGraph(args) => commands::export_graph(args),
        Command::Solve(args) => commands::solve(args, base_config),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
