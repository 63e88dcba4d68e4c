//! `srsolver` — command-line front end for the generalized-domination
//! solver.
//!
//! Subcommands:
//! - `solve`: the full `(k, ℓ)` feasibility table of a graph under a
//!   σ/ρ membership spec, or a single scalar (`--min-k`) or witness
//!   selection (`--witness`) derived from it.
//! - `verify`: solve the same instance twice — dynamic programming vs.
//!   exhaustive enumeration — and diff the tables cell for cell.
//! - `gadget`: emit one of the gadget families (`tremendous`, `fragile`,
//!   `robust`) as a `.gr` graph, a `.td` path decomposition, and a
//!   `.gadget.json` sidecar naming the distinguished vertices and
//!   promised constants.
//! - `bench`: measure join-kernel cost across decomposition widths.
//! - `td`: validate a `.td` file against a graph, or rewrite it in the
//!   unit-step normal form the engine consumes.
//!
//! Domain failures print a single JSON object on stderr —
//! `{"error":{"code":…,"kind":…,"message":…}}` — and exit with a fixed
//! code: 1 runtime failure or verification mismatch, 2 parse error,
//! 3 invalid decomposition, 4 enumeration cap exceeded, 5 unsupported
//! gadget family. All output is deterministic given identical inputs
//! and `--threads 1`.

use std::collections::BTreeMap;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use srsolver_core::conv;
use srsolver_core::decomp::{nicify, NodeKind, TdViolation, TreeDecomposition};
use srsolver_core::dp::{self, DpError, FeasibilityResult, SolveOptions, WitnessSolver};
use srsolver_core::gadgets::{GadgetError, GadgetInstance};
use srsolver_core::instances;
use srsolver_core::model::{Graph, SigmaRhoSpec};
use srsolver_core::oracle::{self, OracleError};
use srsolver_core::pace;

/// Parser for flags that must be at least 1.
fn positive() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::new().range(1..)
}

#[derive(Parser)]
#[command(
    name = "srsolver",
    version,
    about = "Exact (sigma,rho)-domination feasibility over tree decompositions",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the full (k, l) feasibility table of a graph.
    Solve(SolveArgs),
    /// Diff the engine against exhaustive enumeration on a small graph.
    Verify(VerifyArgs),
    /// Emit a gadget instance as .gr/.td files plus a JSON sidecar.
    Gadget(GadgetArgs),
    /// Measure join-kernel cost across decomposition widths.
    Bench(BenchArgs),
    /// Validate or normalize tree-decomposition files.
    Td(TdArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Input graph in .gr format.
    #[arg(long)]
    graph: PathBuf,
    /// Selected-vertex membership set, e.g. "cofinite:0" or "finite:{1}".
    #[arg(long)]
    sigma: String,
    /// Unselected-vertex membership set, e.g. "cofinite:1".
    #[arg(long)]
    rho: String,
    /// Tree decomposition in .td format; defaults to the single-bag
    /// decomposition of the whole vertex set.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Layout for the full-table report.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print only the smallest feasible selection size for the given
    /// violation budget, or "none".
    #[arg(long, requires = "max_violations")]
    min_k: bool,
    /// Violation budget paired with --min-k.
    #[arg(long, value_name = "L")]
    max_violations: Option<usize>,
    /// Print one selection realizing the cell "k,l" as 1-indexed vertex
    /// ids (or "none" if the cell is infeasible).
    #[arg(long, value_name = "K,L", conflicts_with = "min_k")]
    witness: Option<String>,
    /// Worker threads for join-node convolutions.
    #[arg(long, default_value_t = 1, value_parser = positive())]
    threads: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input graph in .gr format; must fit under the enumeration cap
    /// (20 vertices unless SRSOLVER_ORACLE_CAP overrides it).
    #[arg(long)]
    graph: PathBuf,
    /// Selected-vertex membership set.
    #[arg(long)]
    sigma: String,
    /// Unselected-vertex membership set.
    #[arg(long)]
    rho: String,
    /// Worker threads for the engine side of the comparison.
    #[arg(long, default_value_t = 1, value_parser = positive())]
    threads: usize,
}

#[derive(Args)]
struct GadgetArgs {
    #[command(subcommand)]
    family: GadgetFamily,
}

#[derive(Subcommand)]
enum GadgetFamily {
    /// Single-portal gadget: every satisfying selection pays c_t through
    /// the portal, escapes with a violation, or breaks the portal twice.
    Tremendous {
        #[command(flatten)]
        common: GadgetCommon,
    },
    /// Attractor forcing a fixed spend outside its interface set
    /// (requires a cofinite rho without 0).
    Fragile {
        #[command(flatten)]
        common: GadgetCommon,
        /// Interface size d >= 1.
        #[arg(long, value_parser = positive())]
        arity: usize,
    },
    /// Two-hub attractor that keeps forcing its spend even when up to
    /// delta violations are tolerated (requires a finite rho without 0).
    Robust {
        #[command(flatten)]
        common: GadgetCommon,
        /// Interface size d >= 1.
        #[arg(long, value_parser = positive())]
        arity: usize,
        /// Tolerated violation budget delta >= 1.
        #[arg(long, default_value_t = 1, value_parser = positive())]
        delta: usize,
    },
}

#[derive(Args)]
struct GadgetCommon {
    /// Selected-vertex membership set.
    #[arg(long)]
    sigma: String,
    /// Unselected-vertex membership set.
    #[arg(long)]
    rho: String,
    /// Output path prefix; writes PREFIX.gr, PREFIX.td and
    /// PREFIX.gadget.json.
    #[arg(long, default_value = "gadget")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Inclusive width range "a..b".
    #[arg(long, default_value = "2..8")]
    widths: String,
    /// Solves per width; the median wall time is reported.
    #[arg(long, default_value_t = 3, value_parser = positive())]
    reps: usize,
    /// Vertex count of each random instance (raised to width+2 when
    /// smaller).
    #[arg(long, default_value_t = 13)]
    size: usize,
    /// Seed for the instance generator.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct TdArgs {
    #[command(subcommand)]
    action: TdAction,
}

#[derive(Subcommand)]
enum TdAction {
    /// Check the structural properties of a .td file against a graph.
    Validate {
        /// Graph the decomposition claims to cover.
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition to check.
        #[arg(long)]
        td: PathBuf,
    },
    /// Rewrite a valid .td in the engine's unit-step normal form, where
    /// adjacent bags differ by one vertex and branch bags are duplicated.
    Nicify {
        /// Graph the decomposition covers.
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition to rewrite.
        #[arg(long)]
        td: PathBuf,
        /// Write the rewritten .td here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its fixed exit code, serialized as JSON on stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into() }
    }
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DECOMPOSITION: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_UNSUPPORTED: u8 = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            let payload = serde_json::json!({
                "error": { "code": f.code, "kind": f.kind, "message": f.message }
            });
            eprintln!("{payload}");
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gadget(args) => cmd_gadget(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Td(args) => cmd_td(args),
    }
}

// ---------------------------------------------------------------------
// shared plumbing

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, "io", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read_input(path)?;
    pace::parse_graph(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, "parse", format!("{}: {e}", path.display())))
}

fn load_td(path: &Path, g: &Graph) -> Result<TreeDecomposition, Failure> {
    let text = read_input(path)?;
    let (td, declared_n) = pace::parse_td(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, "parse", format!("{}: {e}", path.display())))?;
    if declared_n != g.vertex_count() {
        return Err(Failure::new(
            EXIT_DECOMPOSITION,
            "decomposition",
            format!(
                "{}: declares {declared_n} vertices but the graph has {}",
                path.display(),
                g.vertex_count()
            ),
        ));
    }
    td.validate(g)
        .map_err(|e| Failure::new(EXIT_DECOMPOSITION, "decomposition", e.to_string()))?;
    Ok(td)
}

fn parse_spec(sigma: &str, rho: &str) -> Result<SigmaRhoSpec, Failure> {
    SigmaRhoSpec::parse(sigma, rho)
        .map_err(|e| Failure::new(EXIT_PARSE, "spec", e.to_string()))
}

fn parse_cell(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || {
        Failure::new(
            EXIT_PARSE,
            "parse",
            format!("expected a cell \"k,l\" of two non-negative integers, got {text:?}"),
        )
    };
    let (k, l) = text.split_once(',').ok_or_else(bad)?;
    Ok((k.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
}

fn dp_failure(e: DpError) -> Failure {
    match e {
        DpError::InvalidDecomposition(_) => {
            Failure::new(EXIT_DECOMPOSITION, "decomposition", e.to_string())
        }
        DpError::TableTooLarge { .. } => Failure::new(EXIT_RUNTIME, "resource", e.to_string()),
    }
}

// ---------------------------------------------------------------------
// solve

#[derive(Serialize)]
struct TableReport {
    schema: u32,
    n: usize,
    sigma: String,
    rho: String,
    /// `exact[k][l]`: some size-`k` selection violates exactly `l` vertices.
    exact: Vec<Vec<bool>>,
    /// `at_most[k][l]`: some selection of size <= `k` violates <= `l`.
    at_most: Vec<Vec<bool>>,
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let g = load_graph(&args.graph)?;
    let spec = parse_spec(&args.sigma, &args.rho)?;
    let td = match &args.td {
        Some(path) => load_td(path, &g)?,
        None => TreeDecomposition::trivial(&g),
    };
    let ntd = nicify(&td, &g)
        .map_err(|e| Failure::new(EXIT_DECOMPOSITION, "decomposition", e.to_string()))?;
    let options = SolveOptions { threads: args.threads, ..SolveOptions::default() };

    if let Some(cell) = &args.witness {
        let (k, l) = parse_cell(cell)?;
        let solver = WitnessSolver::new(&g, &spec, &ntd, &options).map_err(dp_failure)?;
        match solver.witness(k, l) {
            Some(selection) => {
                let ids: Vec<String> = selection.iter().map(|v| (v + 1).to_string()).collect();
                println!("{}", ids.join(" "));
            }
            None => println!("none"),
        }
        return Ok(ExitCode::SUCCESS);
    }

    let result = dp::solve_with(&g, &spec, &ntd, &options).map_err(dp_failure)?;
    if args.min_k {
        let budget = args.max_violations.expect("clap pairs --min-k with --max-violations");
        match result.min_k_for_violation_budget(budget) {
            Some(k) => println!("{k}"),
            None => println!("none"),
        }
        return Ok(ExitCode::SUCCESS);
    }

    let n = g.vertex_count();
    match args.format {
        Format::Json => {
            let grid = |f: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<bool>> {
                (0..=n).map(|k| (0..=n).map(|l| f(k, l)).collect()).collect()
            };
            let report = TableReport {
                schema: 1,
                n,
                sigma: spec.sigma.to_string(),
                rho: spec.rho.to_string(),
                exact: grid(&|k, l| result.exact(k, l)),
                at_most: grid(&|k, l| result.at_most(k, l)),
            };
            let text = serde_json::to_string(&report)
                .expect("a table report always serializes");
            println!("{text}");
        }
        Format::Tsv => {
            let mut out = String::from("k\tl\texact\tat_most\n");
            for k in 0..=n {
                for l in 0..=n {
                    let _ = writeln!(
                        out,
                        "{k}\t{l}\t{}\t{}",
                        u8::from(result.exact(k, l)),
                        u8::from(result.at_most(k, l))
                    );
                }
            }
            print!("{out}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let g = load_graph(&args.graph)?;
    let spec = parse_spec(&args.sigma, &args.rho)?;

    let cap = match env::var("SRSOLVER_ORACLE_CAP") {
        Ok(text) => text.parse::<usize>().map_err(|_| {
            Failure::new(EXIT_PARSE, "env", format!("SRSOLVER_ORACLE_CAP={text:?} is not a vertex count"))
        })?,
        Err(_) => oracle::DEFAULT_ENUMERATION_CAP,
    };
    let reference = oracle::brute_force_table_with_cap(&g, &spec, cap).map_err(|e| match e {
        OracleError::CapExceeded { .. } => Failure::new(EXIT_CAP, "cap", e.to_string()),
        other => Failure::new(EXIT_RUNTIME, "oracle", other.to_string()),
    })?;

    let td = instances::sweep_path_decomposition(&g);
    let ntd = nicify(&td, &g)
        .map_err(|e| Failure::new(EXIT_DECOMPOSITION, "decomposition", e.to_string()))?;
    let options = SolveOptions { threads: args.threads, ..SolveOptions::default() };
    let mut engine = dp::solve_with(&g, &spec, &ntd, &options).map_err(dp_failure)?;

    // Test instrumentation: flip one engine cell before the diff so the
    // mismatch path can be exercised end to end.
    if let Ok(cell) = env::var("SRSOLVER_FAULT_INJECT") {
        let (k, l) = parse_cell(&cell)?;
        let n = g.vertex_count();
        if k > n || l > n {
            return Err(Failure::new(
                EXIT_PARSE,
                "env",
                format!("SRSOLVER_FAULT_INJECT cell ({k},{l}) is outside the {n}-vertex table"),
            ));
        }
        let mut bits = Vec::with_capacity((n + 1) * (n + 1));
        for kk in 0..=n {
            for ll in 0..=n {
                bits.push(engine.exact(kk, ll) ^ (kk == k && ll == l));
            }
        }
        engine = FeasibilityResult::from_exact(n, bits);
    }

    match engine.first_difference(&reference) {
        None => {
            let w = g.vertex_count() + 1;
            println!("ok: engine and enumeration agree on all {w}x{w} cells");
            Ok(ExitCode::SUCCESS)
        }
        Some(diff) => {
            println!(
                "mismatch at k={} l={}: engine={} enumeration={}",
                diff.k, diff.l, diff.left, diff.right
            );
            Ok(ExitCode::from(EXIT_RUNTIME))
        }
    }
}

// ---------------------------------------------------------------------
// gadget

/// On-disk sidecar describing a generated gadget; all vertex ids are
/// 1-indexed to match the accompanying `.gr`/`.td` files.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Sidecar {
    schema: u32,
    family: String,
    sigma: String,
    rho: String,
    /// The portal (length 1) or the interface set U (length d).
    distinguished: Vec<usize>,
    constants: BTreeMap<String, usize>,
    /// Structural role map; present only for the robust family.
    #[serde(skip_serializing_if = "Option::is_none")]
    layout: Option<SidecarLayout>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SidecarLayout {
    hubs: [usize; 2],
    guards: [Vec<usize>; 2],
    copies: Vec<SidecarCopy>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SidecarCopy {
    owner: usize,
    portal: usize,
    vertices: Vec<usize>,
}

fn gadget_failure(e: GadgetError) -> Failure {
    match e {
        GadgetError::UnsupportedSpec { .. } | GadgetError::UnsupportedParameter { .. } => {
            Failure::new(EXIT_UNSUPPORTED, "unsupported", e.to_string())
        }
        other => Failure::new(EXIT_RUNTIME, "gadget", other.to_string()),
    }
}

fn cmd_gadget(args: GadgetArgs) -> Result<ExitCode, Failure> {
    use srsolver_core::gadgets::{generate_fragile, generate_robust, generate_tremendous};
    let (family, common) = match &args.family {
        GadgetFamily::Tremendous { common } => ("tremendous", common),
        GadgetFamily::Fragile { common, .. } => ("fragile", common),
        GadgetFamily::Robust { common, .. } => ("robust", common),
    };
    let spec = parse_spec(&common.sigma, &common.rho)?;
    let instance = match &args.family {
        GadgetFamily::Tremendous { .. } => generate_tremendous(&spec),
        GadgetFamily::Fragile { arity, .. } => generate_fragile(&spec, *arity),
        GadgetFamily::Robust { arity, delta, .. } => generate_robust(&spec, *arity, *delta),
    }
    .map_err(gadget_failure)?;
    write_gadget_files(family, &spec, &instance, &common.out)
}

fn write_gadget_files(
    family: &str,
    spec: &SigmaRhoSpec,
    instance: &GadgetInstance,
    prefix: &Path,
) -> Result<ExitCode, Failure> {
    let n = instance.graph.vertex_count();
    let sidecar = Sidecar {
        schema: 1,
        family: family.to_string(),
        sigma: spec.sigma.to_string(),
        rho: spec.rho.to_string(),
        distinguished: instance.distinguished.iter().map(|v| v + 1).collect(),
        constants: instance.constants.clone(),
        layout: instance.robust_layout.as_ref().map(|layout| SidecarLayout {
            hubs: [layout.hubs[0] + 1, layout.hubs[1] + 1],
            guards: [
                layout.guards[0].iter().map(|v| v + 1).collect(),
                layout.guards[1].iter().map(|v| v + 1).collect(),
            ],
            copies: layout
                .copies
                .iter()
                .map(|c| SidecarCopy {
                    owner: c.owner + 1,
                    portal: c.portal + 1,
                    vertices: c.vertices.iter().map(|v| v + 1).collect(),
                })
                .collect(),
        }),
    };

    let gr_path = with_suffix(prefix, ".gr");
    let td_path = with_suffix(prefix, ".td");
    let json_path = with_suffix(prefix, ".gadget.json");

    write_output(&gr_path, &pace::write_graph(&instance.graph))?;
    let mut written = vec![gr_path.display().to_string()];
    if let Some(pd) = &instance.path_decomposition {
        write_output(&td_path, &pace::write_td(pd, n))?;
        written.push(td_path.display().to_string());
    }
    let mut json = serde_json::to_string_pretty(&sidecar)
        .expect("a sidecar always serializes");
    json.push('\n');
    write_output(&json_path, &json)?;
    written.push(json_path.display().to_string());

    println!(
        "{family}: {n} vertices, {} edges -> {}",
        instance.graph.edge_count(),
        written.join(" ")
    );
    Ok(ExitCode::SUCCESS)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::new(EXIT_RUNTIME, "io", format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------
// bench

fn parse_width_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || {
        Failure::new(
            EXIT_PARSE,
            "parse",
            format!("expected an inclusive width range \"a..b\", got {text:?}"),
        )
    };
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().strip_prefix('=').unwrap_or(hi.trim()).trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Failure> {
    let (lo, hi) = parse_width_range(&args.widths)?;
    let spec = SigmaRhoSpec::parse("cofinite:0", "cofinite:1").expect("built-in spec");
    println!("width\tmedian_ms\tkernel_ops");
    for w in lo..=hi {
        let n = args.size.max(w + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(w as u64));
        // Redraw until the decomposition branches: a pure path has no join
        // nodes and would report zero kernel operations.
        let (g, ntd) = loop {
            let (g, td) = instances::random_partial_ktree(n, w, 0.5, &mut rng);
            let ntd = nicify(&td, &g).expect("generated decompositions are valid");
            if ntd.nodes.iter().any(|node| matches!(node.kind, NodeKind::Join)) {
                break (g, ntd);
            }
        };
        let mut times_ms = Vec::with_capacity(args.reps);
        let mut ops = 0;
        for _ in 0..args.reps {
            conv::reset_op_count();
            let started = Instant::now();
            dp::solve_with(&g, &spec, &ntd, &SolveOptions::default()).map_err(dp_failure)?;
            times_ms.push(started.elapsed().as_secs_f64() * 1e3);
            ops = conv::op_count();
        }
        times_ms.sort_by(f64::total_cmp);
        println!("{w}\t{:.3}\t{ops}", times_ms[times_ms.len() / 2]);
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// td

/// Renders a decomposition defect in file coordinates (1-indexed bags and
/// vertices, matching the `.gr`/`.td` on disk).
fn describe_violation(v: &TdViolation) -> String {
    match *v {
        TdViolation::BagVertexOutOfRange { bag, vertex } => {
            format!("bag {} contains out-of-range vertex {}", bag + 1, vertex + 1)
        }
        TdViolation::TreeEdgeOutOfRange { edge } => {
            format!("tree edge {}-{} references a missing bag", edge.0 + 1, edge.1 + 1)
        }
        TdViolation::TreeEdgeLoop { bag } => format!("tree edge loops on bag {}", bag + 1),
        TdViolation::NotATree { bags, edges, reachable_from_first } => format!(
            "bag graph is not a tree ({bags} bags, {edges} edges, \
             {reachable_from_first} reachable from bag 1)"
        ),
        TdViolation::VertexNotCovered { vertex } => {
            format!("vertex {} appears in no bag", vertex + 1)
        }
        TdViolation::EdgeNotCovered { edge } => {
            format!("edge {}-{} is contained in no bag", edge.0 + 1, edge.1 + 1)
        }
        TdViolation::DisconnectedOccurrence { vertex } => {
            format!("bags containing vertex {} are not connected", vertex + 1)
        }
    }
}

fn cmd_td(args: TdArgs) -> Result<ExitCode, Failure> {
    match args.action {
        TdAction::Validate { graph, td } => {
            let g = load_graph(&graph)?;
            let text = read_input(&td)?;
            let (decomposition, declared_n) = pace::parse_td(&text)
                .map_err(|e| Failure::new(EXIT_PARSE, "parse", format!("{}: {e}", td.display())))?;
            if declared_n != g.vertex_count() {
                println!(
                    "invalid: declares {declared_n} vertices but the graph has {}",
                    g.vertex_count()
                );
                return Ok(ExitCode::from(EXIT_DECOMPOSITION));
            }
            match decomposition.validate(&g) {
                Ok(()) => {
                    println!(
                        "ok: {} bags, width {}",
                        decomposition.bags.len(),
                        decomposition.width()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(invalid) => {
                    let first = describe_violation(&invalid.violations[0]);
                    let more = invalid.violations.len() - 1;
                    if more > 0 {
                        println!("invalid: {first} (+{more} more)");
                    } else {
                        println!("invalid: {first}");
                    }
                    Ok(ExitCode::from(EXIT_DECOMPOSITION))
                }
            }
        }
        TdAction::Nicify { graph, td, out } => {
            let g = load_graph(&graph)?;
            let decomposition = load_td(&td, &g)?;
            let ntd = nicify(&decomposition, &g)
                .map_err(|e| Failure::new(EXIT_DECOMPOSITION, "decomposition", e.to_string()))?;
            let bags: Vec<Vec<usize>> = ntd.nodes.iter().map(|node| node.bag.clone()).collect();
            let edges: Vec<(usize, usize)> = ntd
                .nodes
                .iter()
                .enumerate()
                .flat_map(|(id, node)| node.children.iter().map(move |&child| (child, id)))
                .collect();
            let flat = TreeDecomposition::new(bags, edges);
            let text = pace::write_td(&flat, g.vertex_count());
            match out {
                Some(path) => {
                    write_output(&path, &text)?;
                    println!(
                        "ok: {} nodes, width {} -> {}",
                        ntd.node_count(),
                        ntd.width(),
                        path.display()
                    );
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
