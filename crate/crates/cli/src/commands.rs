use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};

use satwl_core::cnf::{parse_dimacs, write_dimacs, CnfFormula, InstanceMeta};
use satwl_core::gen::{
    build_cfi_pair, build_tseitin, encode_graph_as_cnf, extract_from_lig, make_3_regular,
    random_3sat, random_lig, random_regular_graph, BaseGraph, CfiInstance, ChargeFunction,
    THRESHOLD_MULTIPLIER,
};
use satwl_core::graph::{build_lcg, build_lcn, build_lig, build_vcg, parse_graph, write_graph};
use satwl_core::harness::{
    aggregate_rows, run_batch, BatchConfig, BatchInstance, Strategy, AGGREGATE_CSV_HEADER,
    INSTANCE_CSV_HEADER,
};
use satwl_core::solver::{solve_embedded, Budget, Verdict};
use satwl_core::wl::{kwl_distinguish, wl_refine, KwlVerdict, WlVerdict};

use crate::config::{RunConfig, SolverKind};
use crate::{ExportGraphArgs, GenerateArgs, RcritArgs, SolveArgs, WlArgs};

/// Accumulates timestamped progress lines; mirrored to stderr, flushed to
/// `run.log` when the run has an output directory.
struct RunLog {
    lines: Vec<String>,
}

impl RunLog {
    fn new() -> Self {
        RunLog { lines: Vec::new() }
    }

    fn note(&mut self, message: impl AsRef<str>) {
        let epoch_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or_default();
        let line = format!("[{epoch_ms}] {}", message.as_ref());
        eprintln!("{line}");
        self.lines.push(line);
    }

    fn write_to(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join("run.log"), self.lines.join("\n") + "\n").context("writing run.log")?;
        Ok(())
    }
}

fn parse_base(spec: &str, seed: u64) -> Result<(String, BaseGraph)> {
    let graph = match spec {
        "k2" => BaseGraph::single_edge(),
        "k4" => BaseGraph::complete(4),
        "k33" => BaseGraph::complete_bipartite(3, 3),
        "petersen" => BaseGraph::petersen(),
        "prism" => BaseGraph::prism(),
        _ => {
            let mut parts = spec.split(':');
            let kind = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|t| t.parse().context("base graph size"))
                .collect::<Result<_>>()?;
            match (kind, nums.as_slice()) {
                ("cycle", [n]) => BaseGraph::cycle(*n),
                ("complete", [n]) => BaseGraph::complete(*n),
                ("path", [n]) => BaseGraph::path(*n),
                ("bipartite", [a, b]) => BaseGraph::complete_bipartite(*a, *b),
                ("random3", [n]) => random_regular_graph(*n, 3, seed)?,
                _ => bail!("unknown base graph {spec:?}"),
            }
        }
    };
    Ok((spec.replace(':', "-"), graph))
}

fn write_instance(
    dir: &Path,
    id: &str,
    formula: &CnfFormula,
    meta: &mut InstanceMeta,
    log: &mut RunLog,
) -> Result<PathBuf> {
    meta.set("n_vars", formula.num_vars());
    meta.set("n_clauses", formula.num_clauses());
    let cnf_path = dir.join(format!("{id}.cnf"));
    fs::write(&cnf_path, write_dimacs(formula))
        .with_context(|| format!("writing {}", cnf_path.display()))?;
    let meta_path = dir.join(format!("{id}.meta"));
    fs::write(&meta_path, meta.to_text())
        .with_context(|| format!("writing {}", meta_path.display()))?;
    log.note(format!(
        "wrote {} ({} vars, {} clauses)",
        cnf_path.display(),
        formula.num_vars(),
        formula.num_clauses()
    ));
    println!("{}", cnf_path.display());
    Ok(cnf_path)
}

fn cfi_meta(inst: &CfiInstance, base_name: &str, seed: Option<u64>) -> InstanceMeta {
    let mut meta = InstanceMeta::new("cfi");
    meta.set("base", base_name);
    meta.set("base_edges", inst.base().edge_list_string());
    meta.set("twist", inst.is_twisted());
    if let Some((u, v)) = inst.twisted_edge() {
        meta.set("twisted_edge", format!("{u}-{v}"));
    }
    if let Some(sat) = inst.certified_satisfiable() {
        meta.set_ground_truth(sat);
    }
    if let Some(seed) = seed {
        meta.set("seed", seed);
    }
    meta
}

pub fn generate(args: GenerateArgs, config: RunConfig) -> Result<u8> {
    let mut log = RunLog::new();
    let out_dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let seed = args.seed.unwrap_or(config.seed);
    let multiplier = args.multiplier.unwrap_or(THRESHOLD_MULTIPLIER);
    let difficulty = args.difficulty.clone();

    let set_common = |meta: &mut InstanceMeta| {
        if let Some(d) = &difficulty {
            meta.set("difficulty", d);
        }
    };

    match args.family.as_str() {
        "cfi" => {
            let spec = args.base.clone().context("--family cfi needs --base")?;
            let (name, base) = parse_base(&spec, seed)?;
            let used_seed = spec.starts_with("random3").then_some(seed);
            let (plain, twisted) = build_cfi_pair(&base)?;
            for inst in [&plain, &twisted] {
                let suffix = if inst.is_twisted() {
                    "twisted"
                } else {
                    "plain"
                };
                let id = format!("cfi-{name}-{suffix}");
                let mut meta = cfi_meta(inst, &name, used_seed);
                set_common(&mut meta);
                write_instance(&out_dir, &id, inst.formula(), &mut meta, &mut log)?;
            }
        }
        "tseitin" => {
            let spec = args.base.clone().context("--family tseitin needs --base")?;
            let (name, base) = parse_base(&spec, seed)?;
            let spec_charges = args.charges.as_deref().unwrap_or("zero");
            let charges = match spec_charges {
                "zero" => ChargeFunction::zero(base.num_nodes()),
                "odd" => {
                    // A single charged vertex: certified unsatisfiable.
                    ChargeFunction::from_bits(1, base.num_nodes())
                }
                "random" => {
                    use rand::Rng;
                    let mut rng = rand_chacha_seed(seed);
                    let bits: u64 = rng.gen();
                    ChargeFunction::from_bits(bits, base.num_nodes())
                }
                csv => {
                    let charges: Vec<bool> = csv
                        .split(',')
                        .map(|t| match t.trim() {
                            "0" => Ok(false),
                            "1" => Ok(true),
                            other => bail!("charge {other:?} is not 0 or 1"),
                        })
                        .collect::<Result<_>>()?;
                    ChargeFunction::new(charges)
                }
            };
            let formula = build_tseitin(&base, &charges)?;
            let id = format!("tseitin-{name}-{spec_charges}-s{seed}");
            let mut meta = InstanceMeta::new("tseitin");
            meta.set("base", &name);
            meta.set("base_edges", base.edge_list_string());
            meta.set("charges", charges.to_csv());
            meta.set("seed", seed);
            meta.set_ground_truth(charges.total_is_even());
            set_common(&mut meta);
            write_instance(&out_dir, &id, &formula, &mut meta, &mut log)?;
        }
        "random3sat" | "regular3" => {
            let n = args.n.context("--family random3sat/regular3 needs --n")?;
            for i in 0..args.count as u64 {
                let instance_seed = seed + i;
                let mut formula = random_3sat(n, multiplier, instance_seed)?;
                if args.family == "regular3" {
                    formula = make_3_regular(&formula)?;
                }
                let id = format!("{}-n{n}-s{instance_seed}", args.family);
                let mut meta = InstanceMeta::new(&args.family);
                meta.set("n", n);
                meta.set("multiplier", multiplier);
                meta.set("seed", instance_seed);
                set_common(&mut meta);
                write_instance(&out_dir, &id, &formula, &mut meta, &mut log)?;
            }
        }
        "lig-extract" => {
            let (graph, descriptor) = match &args.from_graph {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let g = parse_graph(&text)
                        .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))?;
                    (g, format!("file-{}", sanitize(path)))
                }
                None => {
                    let literals = args
                        .literals
                        .context("--family lig-extract needs --literals or --from-graph")?;
                    let p = args.edge_prob.unwrap_or(0.5);
                    (
                        random_lig(literals, p, seed)?,
                        format!("gnp{literals}-p{p}"),
                    )
                }
            };
            let formula = extract_from_lig(&graph, seed)?;
            let id = format!("lig-extract-{descriptor}-s{seed}");
            let mut meta = InstanceMeta::new("lig-extract");
            meta.set("literal_nodes", graph.num_nodes());
            meta.set("lig_edges", graph.num_edges());
            if let Some(p) = args.edge_prob {
                meta.set("edge_prob", p);
            }
            meta.set("seed", seed);
            set_common(&mut meta);
            write_instance(&out_dir, &id, &formula, &mut meta, &mut log)?;
        }
        "graph-encode" => {
            let spec = args
                .base
                .clone()
                .context("--family graph-encode needs --base")?;
            let (name, base) = parse_base(&spec, seed)?;
            let formula = encode_graph_as_cnf(&base);
            let id = format!("graph-encode-{name}");
            let mut meta = InstanceMeta::new("graph-encode");
            meta.set("base", &name);
            meta.set("base_edges", base.edge_list_string());
            // The encoding is satisfied by the all-true assignment.
            meta.set_ground_truth(true);
            set_common(&mut meta);
            write_instance(&out_dir, &id, &formula, &mut meta, &mut log)?;
        }
        other => bail!("unknown family {other:?}"),
    }

    if args.out.is_some() {
        let mut resolved = config.resolved_text();
        writeln!(resolved, "family={}", args.family)?;
        writeln!(resolved, "generate_seed={seed}")?;
        fs::write(out_dir.join("resolved.cfg"), resolved)?;
        log.write_to(&out_dir)?;
    }
    Ok(0)
}

fn sanitize(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_string())
}

fn rand_chacha_seed(seed: u64) -> impl rand::Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn load_formula(path: &Path) -> Result<CnfFormula> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_dimacs(std::io::BufReader::new(file))
        .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))
}

pub fn wl(args: WlArgs, config: RunConfig) -> Result<u8> {
    let fa = load_formula(&args.file_a)?;
    let fb = load_formula(&args.file_b)?;
    let ga = build_lcn(&fa);
    let gb = build_lcn(&fb);

    if args.trace {
        let union = ga.disjoint_union(&gb);
        let run = wl_refine(&union, None);
        for (round, sizes) in run.partition_history().into_iter().enumerate() {
            eprintln!("round {round}: {} classes, sizes {:?}", sizes.len(), sizes);
        }
    }

    match args.k {
        1 => {
            let verdict = satwl_core::wl::wl_distinguish(&ga, &gb);
            match verdict {
                WlVerdict::Distinguished { round } => {
                    println!("distinguished round={round} k=1");
                    Ok(0)
                }
                WlVerdict::Indistinguishable { stable_round, .. } => {
                    println!("indistinguishable stable_round={stable_round} k=1");
                    Ok(1)
                }
            }
        }
        k => {
            let budget = args.tuple_budget.or(config.tuple_budget);
            match kwl_distinguish(&ga, &gb, k, budget)? {
                KwlVerdict::Distinguished => {
                    println!("distinguished k={k}");
                    Ok(0)
                }
                KwlVerdict::Indistinguishable => {
                    println!("indistinguishable k={k}");
                    Ok(1)
                }
            }
        }
    }
}

fn collect_inputs(inputs: &[PathBuf], log: &mut RunLog) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            match fs::read_dir(input) {
                Ok(entries) => {
                    let mut found: Vec<PathBuf> = entries
                        .filter_map(|e| e.ok())
                        .map(|e| e.path())
                        .filter(|p| p.extension().is_some_and(|x| x == "cnf"))
                        .collect();
                    found.sort();
                    files.extend(found);
                }
                Err(e) => log.note(format!("skipping {}: {e}", input.display())),
            }
        } else {
            files.push(input.clone());
        }
    }
    files
}

pub fn rcrit(args: RcritArgs, mut config: RunConfig) -> Result<u8> {
    let mut log = RunLog::new();
    if let Some(solver) = &args.solver {
        config.solver = match solver.as_str() {
            "embedded" => SolverKind::Embedded,
            "external" => SolverKind::External,
            other => bail!("unknown solver {other:?}"),
        };
    }
    if args.solver_cmd.is_some() {
        config.solver_cmd = args.solver_cmd.clone();
    }
    if args.timeout_secs.is_some() {
        config.timeout_secs = args.timeout_secs;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if let Some(strategy) = &args.strategy {
        config.strategy = match strategy.as_str() {
            "linear" => Strategy::LinearScan,
            "binary" => Strategy::BinarySearch,
            other => bail!("unknown strategy {other:?}"),
        };
    }
    config.out = args.out.clone().or(config.out);

    let files = collect_inputs(&args.inputs, &mut log);
    if files.is_empty() {
        log.note("no input instances");
    }

    // Load what parses; a broken file is logged and skipped, the batch
    // continues.
    let mut instances = Vec::new();
    let mut unreadable: Vec<(String, String)> = Vec::new();
    for path in &files {
        match load_formula(path) {
            Ok(formula) => {
                let meta_path = path.with_extension("meta");
                let meta: InstanceMeta = fs::read_to_string(&meta_path)
                    .ok()
                    .and_then(|t| t.parse().ok())
                    .unwrap_or_default();
                instances.push(BatchInstance {
                    id: path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string()),
                    family: meta.family().unwrap_or("unknown").to_string(),
                    difficulty: meta.difficulty().unwrap_or("").to_string(),
                    formula,
                });
            }
            Err(e) => {
                log.note(format!("skipping unreadable instance: {e:#}"));
                unreadable.push((path.display().to_string(), format!("{e:#}")));
            }
        }
    }

    let batch_config = BatchConfig {
        solver: config.backend()?,
        strategy: config.strategy,
        workers: config.workers,
        timeout: config.timeout(),
    };
    log.note(format!(
        "running {} instances on {} workers",
        instances.len(),
        batch_config.workers
    ));
    let report = run_batch(&instances, &batch_config);
    for (id, reason) in &report.skipped {
        log.note(format!("instance {id} failed: {reason}"));
    }

    let mut instance_csv = String::from(INSTANCE_CSV_HEADER);
    instance_csv.push('\n');
    for row in &report.rows {
        instance_csv.push_str(&row.to_csv_row());
        instance_csv.push('\n');
    }
    let mut aggregate_csv = String::from(AGGREGATE_CSV_HEADER);
    aggregate_csv.push('\n');
    for row in aggregate_rows(&report.rows) {
        aggregate_csv.push_str(&row.to_csv_row());
        aggregate_csv.push('\n');
    }

    if args.aggregate {
        print!("{aggregate_csv}");
    } else {
        print!("{instance_csv}");
    }

    if let Some(dir) = &config.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("instances.csv"), &instance_csv)?;
        fs::write(dir.join("aggregate.csv"), &aggregate_csv)?;
        fs::write(dir.join("resolved.cfg"), config.resolved_text())?;
        log.note(format!("reports written to {}", dir.display()));
        log.write_to(dir)?;
    }
    Ok(0)
}

pub fn export_graph(args: ExportGraphArgs) -> Result<u8> {
    let formula = load_formula(&args.file)?;
    let graph = match args.repr.as_str() {
        "lcn" => build_lcn(&formula),
        "lcg" => build_lcg(&formula),
        "vcg" => build_vcg(&formula),
        "lig" => build_lig(&formula),
        other => bail!("unknown representation {other:?}, expected lcn|lcg|vcg|lig"),
    };
    let text = write_graph(&graph);
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(0)
}

pub fn solve(args: SolveArgs, mut config: RunConfig) -> Result<u8> {
    let formula = load_formula(&args.file)?;
    if let Some(solver) = &args.solver {
        config.solver = match solver.as_str() {
            "embedded" => SolverKind::Embedded,
            "external" => SolverKind::External,
            other => bail!("unknown solver {other:?}"),
        };
    }
    if args.solver_cmd.is_some() {
        config.solver_cmd = args.solver_cmd.clone();
    }
    if args.timeout_secs.is_some() {
        config.timeout_secs = args.timeout_secs;
    }

    let result = match config.solver {
        SolverKind::Embedded => {
            let budget = Budget {
                max_decisions: args.max_decisions,
                max_wall: config.timeout(),
            };
            solve_embedded(&formula, &budget)
        }
        SolverKind::External => config.backend()?.solve(&formula)?,
    };

    println!("c engine {}", result.engine);
    println!(
        "c decisions {} propagations {} conflicts {}",
        result.stats.decisions, result.stats.propagations, result.stats.conflicts
    );
    match result.verdict {
        Verdict::Sat => {
            println!("s SATISFIABLE");
            let model = result.model.expect("SAT results carry models");
            let mut line = String::from("v");
            for (&var, &value) in model.bindings() {
                let lit = if value { var as i64 } else { -(var as i64) };
                write!(line, " {lit}")?;
                if line.len() > 72 {
                    println!("{line}");
                    line = String::from("v");
                }
            }
            println!("{line} 0");
            let _ = std::io::stdout().flush();
            Ok(10)
        }
        Verdict::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        Verdict::Unknown => {
            if let Some(diag) = &result.diagnostics {
                println!("c {diag}");
            }
            println!("s UNKNOWN");
            Ok(0)
        }
    }
}
