//! The `spx` command-line tool.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::SpxError;
use crate::graph::{
    all_pairs_shortest_paths, generate_binary_tree, generate_community_graph, generate_random_dag,
    DistanceMatrix, Graph,
};
use crate::io::{parse_graph, parse_layout, render_svg, write_graph, SvgOptions};
use crate::layout::Layout;
use crate::metrics::{report, MetricsReport};
use crate::optimizer::{
    initial_layout, spx_optimize, sweep, GdKind, GdVariant, InitMethod, RunConfig, RunResult,
    Selection, SweepGrid, TraceRecord,
};
use crate::penalties::{AngleGradient, PenaltyMode};
use crate::rng::derive_seed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<SpxError> for CliError {
    fn from(e: SpxError) -> Self {
        match e {
            SpxError::NonFiniteUpdate(_) | SpxError::LpFailure(_) | SpxError::SingularSystem => {
                CliError::Runtime(e.to_string())
            }
            SpxError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "spx", version, about = "Stress-plus-X graph layout")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one optimization.
    Layout(LayoutArgs),
    /// Run a grid of optimizations and keep the best.
    Sweep(SweepArgs),
    /// Compute readability metrics for a layout.
    Metrics(MetricsArgs),
    /// Generate a graph.
    Gen(GenArgs),
    /// Compare the optimizer with the stress-only baseline over a corpus.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Crossing,
    Angle,
}

impl From<ModeArg> for PenaltyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Crossing => PenaltyMode::CrossingOnly,
            ModeArg::Angle => PenaltyMode::CrossingAngle,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelectArg {
    Cost,
    Angle,
    Crossings,
}

impl From<SelectArg> for Selection {
    fn from(s: SelectArg) -> Self {
        match s {
            SelectArg::Cost => Selection::MinCost,
            SelectArg::Angle => Selection::MaxMinAngle,
            SelectArg::Crossings => Selection::MinCrossings,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct CommonRunArgs {
    #[arg(long, value_enum, default_value = "crossing")]
    mode: ModeArg,
    /// Keep every directed edge pointing upward.
    #[arg(long)]
    upward: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Outer iterations per run.
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Gradient steps per outer iteration.
    #[arg(long, default_value_t = 1)]
    inner_steps: usize,
    /// Margin for upward constraints.
    #[arg(long, default_value_t = 0.01)]
    upward_eps: f64,
    /// Weight of the upward hinge penalty.
    #[arg(long, default_value_t = 10.0)]
    upward_mu: f64,
    /// Hold cos^2(theta) fixed within an iteration in angle mode.
    #[arg(long)]
    frozen_angle: bool,
    /// Override the learning rate of every variant.
    #[arg(long)]
    lr: Option<f64>,
}

#[derive(Debug, Args)]
struct LayoutArgs {
    graph: PathBuf,
    #[command(flatten)]
    common: CommonRunArgs,
    #[arg(short = 'K', long = "k", default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value = "adam")]
    variant: String,
    #[arg(long, default_value = "stress")]
    init: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    /// Base-2 exponent range `lo..hi`, or a comma-separated list of K values.
    #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
    k_grid: String,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Comma-separated GD variants, or `all`.
    #[arg(long, default_value = "all")]
    variants: String,
    /// Comma-separated initializers (stress, force, random), or `all`.
    #[arg(long, default_value = "all")]
    inits: String,
}

#[derive(Debug, Args)]
struct SweepArgs {
    graph: PathBuf,
    #[command(flatten)]
    common: CommonRunArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "cost")]
    select: SelectArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    all_csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    graph: PathBuf,
    layout: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Random connected DAG.
    Dag {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        density: f64,
    },
    /// Complete balanced binary tree.
    Tree {
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Planted-partition community graph.
    Community {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        communities: usize,
        #[arg(long, default_value_t = 0.3)]
        p_in: f64,
        #[arg(long, default_value_t = 0.01)]
        p_out: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BaselineArg {
    Stress,
}

#[derive(Debug, Args)]
struct BenchArgs {
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "stress")]
    baseline: BaselineArg,
    #[command(flatten)]
    common: CommonRunArgs,
    #[arg(long, default_value = "1,2,4", allow_hyphen_values = true)]
    k_grid: String,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value = "vanilla,adam")]
    variants: String,
    #[arg(long, default_value = "stress")]
    inits: String,
    #[arg(long, value_enum, default_value = "crossings")]
    select: SelectArg,
    #[arg(short, long)]
    output: PathBuf,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Layout(a) => cmd_layout(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<(Graph, DistanceMatrix)> {
    let g = parse_graph(&read_text(path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let dm = all_pairs_shortest_paths(&g)?;
    Ok((g, dm))
}

fn parse_variant(name: &str, diameter: f64, lr: Option<f64>) -> CliResult<GdVariant> {
    let kind = GdKind::parse(name).ok_or_else(|| CliError::Usage(format!("unknown GD variant `{name}`")))?;
    let v = GdVariant::with_defaults(kind, diameter);
    Ok(match lr {
        Some(lr) => v.with_learning_rate(lr),
        None => v,
    })
}

fn parse_init(name: &str) -> CliResult<InitMethod> {
    InitMethod::parse(name).ok_or_else(|| CliError::Usage(format!("unknown initializer `{name}`")))
}

fn parse_list<T>(spec: &str, all: &[T], one: impl Fn(&str) -> CliResult<T>) -> CliResult<Vec<T>>
where
    T: Clone,
{
    if spec.eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    spec.split(',').map(|s| one(s.trim())).collect()
}

/// `lo..hi` is an inclusive range of base-2 exponents; anything else is a
/// comma-separated list of K values.
pub fn parse_k_grid(spec: &str) -> std::result::Result<Vec<f64>, String> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i32 = lo.trim().parse().map_err(|_| format!("bad exponent `{lo}` in K grid"))?;
        let hi: i32 = hi.trim().parse().map_err(|_| format!("bad exponent `{hi}` in K grid"))?;
        if lo > hi {
            return Err(format!("empty K grid {lo}..{hi}"));
        }
        return Ok((lo..=hi).map(|e| 2f64.powi(e)).collect());
    }
    spec.split(',')
        .map(|s| {
            let v: f64 = s.trim().parse().map_err(|_| format!("bad K value `{s}`"))?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("K must be positive, got {v}"))
            }
        })
        .collect()
}

fn base_config(common: &CommonRunArgs, dm: &DistanceMatrix) -> RunConfig {
    RunConfig {
        mode: common.mode.into(),
        seed: common.seed,
        outer_iters: common.iters,
        inner_steps: common.inner_steps,
        upward: common.upward,
        upward_eps: common.upward_eps,
        upward_mu: common.upward_mu,
        angle_gradient: if common.frozen_angle {
            AngleGradient::Frozen
        } else {
            AngleGradient::Full
        },
        ..RunConfig::for_graph(dm)
    }
}

fn build_grid(
    k_grid: &str,
    variants: &str,
    inits: &str,
    restarts: usize,
    dm: &DistanceMatrix,
    lr: Option<f64>,
) -> CliResult<SweepGrid> {
    let all_variants: Vec<GdVariant> = GdKind::ALL
        .iter()
        .map(|k| parse_variant(k.name(), dm.diameter(), lr))
        .collect::<CliResult<_>>()?;
    let grid = SweepGrid {
        k_values: parse_k_grid(k_grid).map_err(CliError::Usage)?,
        variants: parse_list(variants, &all_variants, |s| parse_variant(s, dm.diameter(), lr))?,
        inits: parse_list(inits, &InitMethod::ALL, parse_init)?,
        restarts,
    };
    if grid.cells() == 0 {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    Ok(grid)
}

fn trace_csv(trace: &[TraceRecord]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in trace {
        w.serialize(r).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    if trace.is_empty() {
        w.write_record(["iter", "crossings", "stress", "min_angle", "cost"])
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Result document: a layout file plus the run's provenance and metrics.
#[derive(Debug, Serialize)]
struct ResultFile<'a> {
    n: usize,
    coords: &'a [[f64; 2]],
    final_cost: f64,
    metrics: MetricsReport,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSummary>,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    cells: usize,
    failed: usize,
}

fn result_json(run: &RunResult, g: &Graph, dm: &DistanceMatrix, sweep: Option<SweepSummary>) -> String {
    let doc = ResultFile {
        n: run.layout.n(),
        coords: &run.layout.coords,
        final_cost: run.final_cost,
        metrics: report(&run.layout, g, dm),
        config: &run.config,
        sweep,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
    s.push('\n');
    s
}

fn summarize(run: &RunResult, g: &Graph, dm: &DistanceMatrix) {
    let m = report(&run.layout, g, dm);
    eprintln!(
        "cost {:.6}  stress {:.6}  crossings {}  min angle {:.2}  upward {:.3}",
        run.final_cost, m.stress, m.crossings, m.min_crossing_angle_deg, m.upward_fraction
    );
}

fn cmd_layout(a: LayoutArgs) -> CliResult<()> {
    let (g, dm) = load_graph(&a.graph)?;
    let cfg = RunConfig {
        k: a.k,
        variant: parse_variant(&a.variant, dm.diameter(), a.common.lr)?,
        init: parse_init(&a.init)?,
        ..base_config(&a.common, &dm)
    };
    cfg.validate()?;
    let run = spx_optimize(&g, &dm, &cfg)?;
    if let Some(reason) = &run.diagnostics.aborted {
        if let Some(p) = &a.trace {
            write_text(p, &trace_csv(&run.trace)?)?;
        }
        return Err(CliError::Runtime(format!("run aborted: {reason}")));
    }
    let json = result_json(&run, &g, &dm, None);
    match &a.output {
        Some(p) => write_text(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = &a.svg {
        write_text(p, &render_svg(&run.layout, &g, &SvgOptions::default()))?;
    }
    if let Some(p) = &a.trace {
        write_text(p, &trace_csv(&run.trace)?)?;
    }
    summarize(&run, &g, &dm);
    Ok(())
}

#[derive(Debug, Serialize)]
struct RunRow {
    index: usize,
    k: f64,
    variant: &'static str,
    init: &'static str,
    seed: u64,
    valid: bool,
    final_cost: f64,
    final_stress: f64,
    crossings: usize,
    min_angle: f64,
    lp_fallbacks: usize,
    jitters: usize,
}

fn runs_csv(runs: &[RunResult]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (index, r) in runs.iter().enumerate() {
        w.serialize(RunRow {
            index,
            k: r.config.k,
            variant: r.config.variant.kind().name(),
            init: r.config.init.name(),
            seed: r.config.seed,
            valid: r.is_valid(),
            final_cost: r.final_cost,
            final_stress: r.final_stress,
            crossings: r.final_crossings,
            min_angle: r.final_min_angle,
            lp_fallbacks: r.diagnostics.lp_fallbacks,
            jitters: r.diagnostics.jitters,
        })
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    finish_csv(w)
}

fn cmd_sweep(a: SweepArgs) -> CliResult<()> {
    let (g, dm) = load_graph(&a.graph)?;
    let grid = build_grid(&a.grid.k_grid, &a.grid.variants, &a.grid.inits, a.grid.restarts, &dm, a.common.lr)?;
    let base = RunConfig {
        selection: a.select.into(),
        ..base_config(&a.common, &dm)
    };
    base.validate()?;
    log::info!("sweeping {} cells", grid.cells());
    let out = sweep(&g, &dm, &grid, &base)?;

    let json = result_json(
        &out.best,
        &g,
        &dm,
        Some(SweepSummary {
            cells: out.runs.len(),
            failed: out.failed,
        }),
    );
    match &a.output {
        Some(p) => write_text(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = &a.all_csv {
        write_text(p, &runs_csv(&out.runs)?)?;
    }
    if let Some(p) = &a.svg {
        write_text(p, &render_svg(&out.best.layout, &g, &SvgOptions::default()))?;
    }
    if out.failed > 0 {
        eprintln!("{} of {} runs failed", out.failed, out.runs.len());
    }
    summarize(&out.best, &g, &dm);
    Ok(())
}

fn cmd_metrics(a: MetricsArgs) -> CliResult<()> {
    let (g, dm) = load_graph(&a.graph)?;
    let layout = parse_layout(&read_text(&a.layout)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", a.layout.display())))?;
    if layout.n() != g.n() {
        return Err(CliError::Data(format!(
            "layout has {} vertices, graph has {}",
            layout.n(),
            g.n()
        )));
    }
    let mut json = serde_json::to_string_pretty(&report(&layout, &g, &dm)).expect("report serializes");
    json.push('\n');
    match &a.output {
        Some(p) => write_text(p, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn cmd_gen(a: GenArgs) -> CliResult<()> {
    let g = match a.kind {
        GenKind::Dag { n, density } => generate_random_dag(n, density, a.seed)?,
        GenKind::Tree { depth } => generate_binary_tree(depth)?,
        GenKind::Community {
            n,
            communities,
            p_in,
            p_out,
        } => generate_community_graph(n, communities, p_in, p_out, a.seed)?,
    };
    let text = write_graph(&g);
    match &a.output {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct BenchRow<'a> {
    graph: &'a str,
    method: &'static str,
    n: usize,
    m: usize,
    stress: f64,
    crossings: usize,
    min_crossing_angle_deg: f64,
    avg_crossing_angle_deg: f64,
    neighborhood_preservation: f64,
    drawing_area: f64,
    upward_fraction: f64,
}

fn cmd_bench(a: BenchArgs) -> CliResult<()> {
    let BaselineArg::Stress = a.baseline;
    let mut files: Vec<PathBuf> = fs::read_dir(&a.corpus)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", a.corpus.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Data(format!("no .txt graphs in {}", a.corpus.display())));
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    for (gi, path) in files.iter().enumerate() {
        let (g, dm) = load_graph(path)?;
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("?");
        let seed = derive_seed(a.common.seed, &[gi as u64]);
        let base = RunConfig {
            selection: a.select.into(),
            seed,
            ..base_config(&a.common, &dm)
        };
        base.validate()?;

        let mut baseline: Layout = initial_layout(&g, &dm, InitMethod::StressMajorization, seed)?;
        if a.common.upward {
            baseline = crate::optimizer::upward_repair(&baseline, &g, base.upward_eps)?;
        }
        let grid = build_grid(&a.k_grid, &a.variants, &a.inits, a.restarts, &dm, a.common.lr)?;
        let out = sweep(&g, &dm, &grid, &base)?;

        for (method, layout) in [("stress", &baseline), ("spx", &out.best.layout)] {
            let r = report(layout, &g, &dm);
            w.serialize(BenchRow {
                graph: name,
                method,
                n: g.n(),
                m: g.m(),
                stress: r.stress,
                crossings: r.crossings,
                min_crossing_angle_deg: r.min_crossing_angle_deg,
                avg_crossing_angle_deg: r.avg_crossing_angle_deg,
                neighborhood_preservation: r.neighborhood_preservation,
                drawing_area: r.drawing_area,
                upward_fraction: r.upward_fraction,
            })
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        eprintln!("{name}: done");
    }
    write_text(&a.output, &finish_csv(w)?)
}
