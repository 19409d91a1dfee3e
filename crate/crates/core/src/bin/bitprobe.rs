use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use bitprobe::forests::{grow_dense_core, two_forest_partition};
use bitprobe::graphs::{
    check_local_sparsity, check_nash_williams_condition, complete_bipartite, girth, gnp, projective_plane_incidence,
    prune_to_girth, random_locally_sparse, read_graph, wenger_graph, write_graph, Graph, SparsityMode,
    DEFAULT_EXACT_LIMIT,
};
use bitprobe::harness::{
    run_acceptance, run_fixtures, scaling_experiment, verify_exhaustive, verify_or_sample, write_scaling_csv,
    VerifyMode,
};
use bitprobe::memory::{audit_transcript, AdaptivityClass};
use bitprobe::orientation::{brute_force_safe_orient, is_safe, safe_orient, ColoredGraph};
use bitprobe::schemes::{load_state, save_state, MembershipScheme, Packing, SchemeConfig, SchemeId};

type CliResult<T = ()> = Result<T, String>;

/// `println!` that stays quiet when the reader has gone away.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(msg.into())
}

#[derive(Parser)]
#[command(name = "bitprobe", version, about = "Bit-probe set membership schemes and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect substrate graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Safe orientation of a graph with GREEN edges.
    Orient(OrientArgs),
    /// Dense core and two-forest split.
    #[command(subcommand)]
    Forests(ForestsCmd),
    /// Build and query stored sets.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Zero-error verification of a scheme.
    Verify(VerifyArgs),
    /// Space against universe size, with a log-log fit.
    Scale(ScaleArgs),
    /// Checks on the small example graphs and tight examples.
    Fixtures,
    /// Runs the acceptance criteria.
    Acceptance(AcceptanceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Complete bipartite K_{a,a}.
    Kbb,
    /// Projective plane incidence graph of order q.
    Pp,
    /// Wenger graph H_k(p).
    Wenger,
    /// Random locally sparse graph on N vertices.
    Sparse,
    /// G(N, prob) (or --from FILE) pruned to a girth bound.
    Prune,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Writes a graph file: "N M" then one "u v" line per edge.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        p: Option<u64>,
        /// Vertex count for `sparse` and `prune`.
        #[arg(long)]
        vertices: Option<usize>,
        /// Edge probability for `prune` without `--from`.
        #[arg(long, default_value_t = 0.2)]
        prob: f64,
        /// Girth bound for `prune`.
        #[arg(long)]
        girth: Option<usize>,
        /// Graph to prune instead of a random one.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Girth with a witness cycle.
    Girth { file: PathBuf },
    /// Local sparsity or Nash-Williams check.
    Sparsity {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Ratio such as 5/4.
        #[arg(long, default_value = "5/4")]
        alpha: String,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check "every X induces at most 2(|X|-1) edges" instead.
        #[arg(long)]
        nash_williams: bool,
    },
}

#[derive(Args)]
struct OrientArgs {
    #[arg(long)]
    graph: PathBuf,
    /// GREEN edge indices, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "")]
    green: Vec<String>,
    /// Search all orientations instead of running the constructive procedure.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Subcommand)]
enum ForestsCmd {
    /// Splits the edges induced on a vertex set into two forests. The set is
    /// `--subset`, or the dense core grown from `--seeds` when that is absent.
    Split {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["seeds", "n"])]
        subset: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', requires = "n")]
        seeds: Vec<usize>,
        /// Set size bound; the core may add at most 2n vertices.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args, Clone)]
struct SchemeOpts {
    #[arg(long)]
    scheme: SchemeId,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Substrate graph file; chosen automatically when absent.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Slices per vertex; defaults to ceil(m / M).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "edge-major")]
    packing: Packing,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SchemeOpts {
    fn config(&self) -> CliResult<SchemeConfig> {
        let mut cfg = match &self.graph {
            Some(path) if self.scheme.uses_graph() => {
                SchemeConfig::new(self.scheme, self.m, self.n).with_graph(Arc::new(load_graph(path)?))
            }
            _ => SchemeConfig::auto(self.scheme, self.m, self.n, self.seed).map_err(|e| e.to_string())?,
        };
        if let Some(k) = self.k {
            cfg = cfg.with_k(k);
        }
        Ok(cfg.with_packing(self.packing))
    }
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Stores a set and writes a state file.
    Build {
        #[command(flatten)]
        opts: SchemeOpts,
        #[arg(long, value_delimiter = ',', default_value = "")]
        set: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answers one membership query from a state file.
    Query {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        x: usize,
        /// Print the probe transcript as JSON lines.
        #[arg(long)]
        dump_transcript: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    opts: SchemeOpts,
    /// `all` or `sampled`.
    #[arg(long, default_value = "all")]
    mode: String,
    /// Sets for sampled runs, and for the fallback when `all` is over budget.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

#[derive(Args)]
struct ScaleArgs {
    #[arg(long)]
    scheme: SchemeId,
    /// Universe sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AcceptanceArgs {
    /// Criterion numbers, comma separated; all when absent.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    /// Print JSON instead of one line per criterion.
    #[arg(long)]
    json: bool,
}

fn load_graph(path: &PathBuf) -> CliResult<Graph> {
    read_graph(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_list(items: &[String]) -> CliResult<Vec<usize>> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e| format!("bad number {s:?}: {e}")))
        .collect()
}

fn print_json(v: &impl serde::Serialize) -> CliResult {
    outln!("{}", serde_json::to_string_pretty(v).map_err(|e| e.to_string())?);
    Ok(())
}

fn graph_cmd(cmd: GraphCmd) -> CliResult<bool> {
    match cmd {
        GraphCmd::Build { family, a, q, k, p, vertices, prob, girth: target, from, seed, out } => {
            let need = |v: Option<u64>, name: &str| v.ok_or_else(|| format!("--{name} is required for this family"));
            let g = match family {
                Family::Kbb => complete_bipartite(need(a.map(|a| a as u64), "a")? as usize),
                Family::Pp => projective_plane_incidence(need(q, "q")?),
                Family::Wenger => wenger_graph(k, need(p, "p")?),
                Family::Sparse => random_locally_sparse(need(vertices.map(|v| v as u64), "vertices")? as usize, seed),
                Family::Prune => {
                    let base = match &from {
                        Some(path) => load_graph(path)?,
                        None => gnp(need(vertices.map(|v| v as u64), "vertices")? as usize, prob, seed),
                    };
                    prune_to_girth(&base, need(target.map(|t| t as u64), "girth")? as usize, seed)
                }
            }
            .map_err(|e| e.to_string())?;
            let text = write_graph(&g);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => out!("{text}"),
            }
            Ok(true)
        }
        GraphCmd::Girth { file } => {
            let g = load_graph(&file)?;
            let cert = girth(&g);
            print_json(&json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "girth": cert.girth.finite(),
                "witness_cycle": cert.witness_cycle,
            }))?;
            Ok(true)
        }
        GraphCmd::Sparsity { file, k, alpha, mode, trials, seed, nash_williams } => {
            let g = load_graph(&file)?;
            let mode = match mode.as_str() {
                "exact" => SparsityMode::Exact { limit: DEFAULT_EXACT_LIMIT },
                "sampled" => SparsityMode::Sampled { trials, seed },
                other => return fail(format!("unknown mode {other:?}")),
            };
            let report = if nash_williams {
                check_nash_williams_condition(&g, mode)
            } else {
                let alpha: Ratio<u64> = alpha.parse().map_err(|e| format!("bad alpha {alpha:?}: {e}"))?;
                check_local_sparsity(&g, k, alpha, mode)
            }
            .map_err(|e| e.to_string())?;
            print_json(&report)?;
            Ok(report.satisfied)
        }
    }
}

fn orient_cmd(args: OrientArgs) -> CliResult<bool> {
    let g = load_graph(&args.graph)?;
    let h = ColoredGraph::new(g, parse_list(&args.green)?).map_err(|e| e.to_string())?;
    if args.brute_force {
        let found = brute_force_safe_orient(&h).map_err(|e| e.to_string())?;
        let safe = found.is_some();
        print_json(&json!({
            "safe": safe,
            "toward_larger": found.map(|o| o.bits().iter().map(|&b| b as u8).collect::<Vec<_>>()),
        }))?;
        return Ok(safe);
    }
    let o = safe_orient(&h).map_err(|e| e.to_string())?;
    let safe = is_safe(&h, &o.orientation).map_err(|e| e.to_string())?;
    print_json(&json!({
        "safe": safe,
        "path": o.path,
        "rounds": o.rounds,
        "toward_larger": o.orientation.bits().iter().map(|&b| b as u8).collect::<Vec<_>>(),
    }))?;
    Ok(safe)
}

fn forests_cmd(cmd: ForestsCmd) -> CliResult<bool> {
    let ForestsCmd::Split { graph, subset, seeds, n } = cmd;
    let g = load_graph(&graph)?;
    if let Some(subset) = subset {
        let split = two_forest_partition(&g, &subset).map_err(|e| e.to_string())?;
        print_json(&json!({ "partition": split }))?;
        return Ok(true);
    }
    let n = n.ok_or("either --subset or --seeds with --n is required")?;
    let core = grow_dense_core(&g, &seeds, n).map_err(|e| e.to_string())?;
    let split = two_forest_partition(&g, &core.vertices).map_err(|e| e.to_string())?;
    print_json(&json!({ "core": core, "partition": split }))?;
    Ok(true)
}

fn scheme_cmd(cmd: SchemeCmd) -> CliResult<bool> {
    match cmd {
        SchemeCmd::Build { opts, set, out } => {
            let cfg = opts.config()?;
            let inst = cfg.build(&parse_list(&set)?).map_err(|e| e.to_string())?;
            save_state(&inst, &out).map_err(|e| e.to_string())?;
            print_json(&json!({
                "scheme": inst.id(),
                "m": inst.universe(),
                "n": inst.capacity(),
                "space_bits": inst.space_bits(),
                "formula_bits": inst.formula_bits(),
                "state": out,
            }))?;
            Ok(true)
        }
        SchemeCmd::Query { state, x, dump_transcript } => {
            let inst = load_state(&state).map_err(|e| e.to_string())?;
            let (answer, t) = inst.query(x).map_err(|e| e.to_string())?;
            let verdict = audit_transcript(&t, inst.probe_budget(), inst.class(), &mut |p| {
                let _ = inst.query_with(x, p);
            });
            if dump_transcript {
                out!("{}", t.to_json_lines(inst.store()));
            }
            let class = match inst.class() {
                AdaptivityClass::Adaptive => "ADAPTIVE",
                AdaptivityClass::NonAdaptive => "NON_ADAPTIVE",
            };
            outln!(
                "{}",
                json!({ "x": x, "member": answer, "probes": t.probe_count(), "class": class, "audit": verdict })
            );
            Ok(verdict.pass)
        }
    }
}

fn verify_cmd(args: VerifyArgs) -> CliResult<bool> {
    let cfg = args.opts.config()?;
    let report = match args.mode.as_str() {
        "all" => verify_or_sample(&cfg, VerifyMode::AllSets, args.count, args.opts.seed),
        "sampled" => verify_exhaustive(&cfg, VerifyMode::Sampled { count: args.count, seed: args.opts.seed }),
        other => return fail(format!("unknown mode {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let pass = report.pass();
    print_json(&json!({ "pass": pass, "report": report }))?;
    Ok(pass)
}

fn scale_cmd(args: ScaleArgs) -> CliResult<bool> {
    let r = scaling_experiment(args.scheme, &args.m, args.n, args.seed).map_err(|e| e.to_string())?;
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        write_scaling_csv(&r.rows, file).map_err(|e| e.to_string())?;
    }
    let exact = r.rows.iter().all(|row| row.space_bits == row.formula_bits);
    print_json(&json!({ "fit": r.fit, "decades": r.decades(), "space_exact": exact, "rows": r.rows }))?;
    Ok(exact)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let outcome = match Cli::parse().command {
        Command::Graph(cmd) => graph_cmd(cmd),
        Command::Orient(args) => orient_cmd(args),
        Command::Forests(cmd) => forests_cmd(cmd),
        Command::Scheme(cmd) => scheme_cmd(cmd),
        Command::Verify(args) => verify_cmd(args),
        Command::Scale(args) => scale_cmd(args),
        Command::Fixtures => {
            let checks = run_fixtures();
            for c in &checks {
                outln!("{}", serde_json::to_string(c).expect("serializable"));
            }
            Ok(checks.iter().all(|c| c.pass))
        }
        Command::Acceptance(args) => {
            let results = run_acceptance(&args.only);
            if args.json {
                print_json(&results).map(|_| ())
            } else {
                results.iter().for_each(|r| outln!("{}", r.line()));
                Ok(())
            }
            .map(|_| results.iter().all(|r| r.pass))
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
