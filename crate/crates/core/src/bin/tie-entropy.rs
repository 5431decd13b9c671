use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use tie_entropy::experiments::{edge_sweep_sampled, positiveness_from_records};
use tie_entropy::io::{self, EdgeListFile, EdgeListFormat, DATA_DIR_ENV};
use tie_entropy::plot;
use tie_entropy::{
    aggregate_sweep, generate, strength_cdf, tau_vs_clustering_curve, tune_clustering, CurveSpec,
    Error, GenParams, Graph, Model, Result, TuneParams,
};

#[derive(Debug, Parser)]
#[command(name = "tie-entropy", version, about = "Entropy gain of social ties on edge-list networks")]
struct Cli {
    /// Where to write the resolved run configuration (default: next to the main output).
    #[arg(long, global = true)]
    run_log: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Generate a synthetic network and write it as a canonical edge list.
    Generate(GenerateArgs),
    /// Load an edge list, normalize it and report its size and clustering.
    LoadCheck(LoadCheckArgs),
    /// Entropy gain of every tie, aggregated by common-friend count.
    Sweep(SweepArgs),
    /// Positiveness against clustering across a family of graphs.
    Curve(CurveArgs),
    /// Cumulative distribution of tie strength.
    Cdf(CdfArgs),
    /// Rewire a graph toward a target clustering, keeping every degree.
    Tune(TuneArgs),
    /// Render CSV outputs as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelKind {
    Ba,
    Sw,
    Cnnr,
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// BA: ties per new node.
    #[arg(long)]
    m: Option<usize>,
    /// SW: neighbors per side (mean degree 2K).
    #[arg(long)]
    k: Option<usize>,
    /// SW: rewiring probability.
    #[arg(long)]
    p: Option<f64>,
    /// CNNR: probability of a tie-forming step.
    #[arg(long)]
    u: Option<f64>,
    /// CNNR: share of tie-forming steps that are random.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FormatArg {
    SnapTsv,
    CsvPairs,
}

impl From<FormatArg> for EdgeListFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::SnapTsv => EdgeListFormat::SnapTsv,
            FormatArg::CsvPairs => EdgeListFormat::CsvPairs,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct InputArgs {
    /// Edge-list file.
    #[arg(long, required_unless_present = "dataset", conflicts_with = "dataset")]
    input: Option<PathBuf>,
    /// Dataset name from the bundled manifest, read from the data directory.
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long, value_enum, default_value = "snap-tsv")]
    format: FormatArg,
    /// Data directory for --dataset (default: $TIE_ENTROPY_DATA or ./data).
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct LoadCheckArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out_sweep: PathBuf,
    #[arg(long)]
    out_aggregate: PathBuf,
    #[arg(long)]
    out_positiveness: Option<PathBuf>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Evaluate only this fraction of ties (seeded).
    #[arg(long)]
    sample: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CurveMode {
    Sw,
    TunedBa,
}

#[derive(Debug, Args, Serialize)]
struct CurveArgs {
    #[arg(long, value_enum)]
    mode: CurveMode,
    #[arg(long)]
    n: usize,
    /// SW neighbors per side.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// BA ties per new node.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Rewiring probabilities (sw) or target clusterings (tuned-ba).
    #[arg(long, value_delimiter = ',', required = true)]
    knobs: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2_000_000)]
    max_swaps: usize,
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct CdfArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct TuneArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    target: f64,
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    #[arg(long, default_value_t = 2_000_000)]
    max_swaps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PlotKind {
    Sweep,
    Curve,
    Cdf,
}

#[derive(Debug, Args, Serialize)]
struct PlotArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    /// Input CSV; repeat for overlaid CDFs.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Series labels for CDF inputs, in order (default: file stems).
    #[arg(long)]
    label: Vec<String>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let log_path = cli.run_log.clone().or_else(|| primary_output(&cli.command).map(|p| sibling(p, "run.json")));
    let config = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": &cli.command,
    });
    let config = serde_json::to_string_pretty(&config).expect("config serializes");
    info!("resolved config: {config}");
    if let Some(path) = log_path {
        fs::write(path, config + "\n")?;
    }
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::LoadCheck(a) => cmd_load_check(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Cdf(a) => cmd_cdf(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn primary_output(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Generate(a) => Some(&a.out),
        Command::LoadCheck(_) => None,
        Command::Sweep(a) => Some(&a.out_sweep),
        Command::Curve(a) => Some(&a.out),
        Command::Cdf(a) => Some(&a.out),
        Command::Tune(a) => Some(&a.out),
        Command::Plot(a) => Some(&a.out),
    }
}

/// `out.csv` -> `out.csv.<suffix>`
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

fn require<T: Copy>(value: Option<T>, flag: &str, model: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParams(format!("--{flag} is required for {model}")))
}

#[derive(Serialize)]
struct GraphMeta {
    #[serde(flatten)]
    params: GenParams,
    nodes: usize,
    edges: usize,
    clustering: f64,
}

fn write_graph_with_meta(g: &Graph, out: &Path, meta: &impl Serialize) -> Result<()> {
    io::save_edge_list(g, out)?;
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    fs::write(sibling(out, "meta.json"), text + "\n")?;
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let model = match a.model {
        ModelKind::Ba => Model::Ba { n: a.n, m: require(a.m, "m", "ba")? },
        ModelKind::Sw => Model::Sw {
            n: a.n,
            k: require(a.k, "k", "sw")?,
            p: require(a.p, "p", "sw")?,
        },
        ModelKind::Cnnr => Model::Cnnr {
            n: a.n,
            u: require(a.u, "u", "cnnr")?,
            r: require(a.r, "r", "cnnr")?,
        },
    };
    let params = GenParams { model, seed: a.seed };
    let g = generate(&params)?;
    g.validate()?;
    let meta = GraphMeta {
        params,
        nodes: g.node_count(),
        edges: g.edge_count(),
        clustering: g.avg_clustering(),
    };
    write_graph_with_meta(&g, &a.out, &meta)?;
    println!("nodes={}", meta.nodes);
    println!("edges={}", meta.edges);
    println!("clustering={}", io::fmt_real(meta.clustering));
    Ok(())
}

fn data_dir(arg: &Option<PathBuf>) -> PathBuf {
    arg.clone()
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("data"))
}

fn load_input(a: &InputArgs) -> Result<Graph> {
    let file = match (&a.input, &a.dataset) {
        (Some(path), _) => EdgeListFile {
            path: path.clone(),
            format: a.format.into(),
            directedness_hint: Default::default(),
        },
        (None, Some(name)) => {
            let manifest = io::builtin_manifest();
            let entry = manifest
                .get(name)
                .ok_or_else(|| Error::InvalidParams(format!("unknown dataset {name:?}")))?;
            entry.edge_list(&data_dir(&a.data_dir))
        }
        (None, None) => return Err(Error::InvalidParams("--input or --dataset is required".into())),
    };
    let loaded = io::load_edge_list(&file)?;
    info!(
        "loaded {}: {} pairs, {} self-loops dropped",
        file.path.display(),
        loaded.raw_pairs,
        loaded.skipped_self_loops
    );
    Ok(loaded.graph)
}

fn cmd_load_check(a: &LoadCheckArgs) -> Result<()> {
    let g = load_input(&a.input)?;
    println!("nodes={}", g.node_count());
    println!("edges={}", g.edge_count());
    println!("clustering={}", io::fmt_real(g.avg_clustering()));
    if let Some(name) = &a.input.dataset {
        let manifest = io::builtin_manifest();
        let entry = manifest.get(name).expect("resolved above");
        println!("expected_nodes={}", entry.expected_nodes);
        println!("expected_edges={}", entry.expected_edges);
        println!("counts_match={}", entry.counts_match(&g));
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let g = load_input(&a.input)?;
    let records = edge_sweep_sampled(&g, a.workers, a.sample.unwrap_or(1.0), a.seed)?;
    let agg = aggregate_sweep(&records)?;
    let report = positiveness_from_records(&records, g.avg_clustering())?;
    io::write_sweep_csv(&records, &a.out_sweep)?;
    io::write_aggregate_csv(&agg, &a.out_aggregate)?;
    if let Some(path) = &a.out_positiveness {
        io::write_positiveness_csv(&report, path)?;
    }
    if agg.total() != records.len() {
        return Err(Error::Invariant("bucket counts do not sum to the sweep size".into()));
    }
    println!("nodes={}", g.node_count());
    println!("edges={}", g.edge_count());
    println!("evaluated={}", records.len());
    println!("tau={}", io::fmt_real(report.tau));
    println!("positive={}", report.positive_count);
    println!("clustering={}", io::fmt_real(report.clustering));
    println!("buckets={}", agg.buckets.len());
    match agg.mean_slope() {
        Some(s) => println!("mean_slope={}", io::fmt_real(s)),
        None => println!("mean_slope=nan"),
    }
    Ok(())
}

fn cmd_curve(a: &CurveArgs) -> Result<()> {
    let spec = match a.mode {
        CurveMode::Sw => CurveSpec::SmallWorld { n: a.n, k: a.k, seed: a.seed },
        CurveMode::TunedBa => CurveSpec::TunedBa {
            n: a.n,
            m: a.m,
            seed: a.seed,
            max_swaps: a.max_swaps,
            tolerance: a.tolerance,
        },
    };
    let points = tau_vs_clustering_curve(&spec, &a.knobs, a.workers)?;
    io::write_curve_csv(&points, &a.out)?;
    for p in &points {
        println!(
            "knob={} c={} tau={}",
            io::fmt_real(p.knob),
            io::fmt_real(p.clustering),
            io::fmt_real(p.tau)
        );
    }
    let cs: Vec<f64> = points.iter().map(|p| p.clustering).collect();
    let taus: Vec<f64> = points.iter().map(|p| p.tau).collect();
    if let Some(rho) = tie_entropy::experiments::spearman(&cs, &taus) {
        println!("spearman={}", io::fmt_real(rho));
    }
    Ok(())
}

fn cmd_cdf(a: &CdfArgs) -> Result<()> {
    let g = load_input(&a.input)?;
    let cdf = strength_cdf(&g)?;
    io::write_cdf_csv(&cdf, &a.out)?;
    println!("edges={}", g.edge_count());
    println!("frac_at_0.1={}", io::fmt_real(cdf.fraction_at(0.1)));
    Ok(())
}

#[derive(Serialize)]
struct TuneMeta {
    target_clustering: f64,
    tolerance: f64,
    seed: u64,
    nodes: usize,
    edges: usize,
    clustering: f64,
    accepted_swaps: usize,
    proposals: usize,
    best_effort: bool,
}

fn cmd_tune(a: &TuneArgs) -> Result<()> {
    let g = load_input(&a.input)?;
    let params = TuneParams {
        target_clustering: a.target,
        max_swaps: a.max_swaps,
        tolerance: a.tolerance,
    };
    let out = tune_clustering(&g, &params, a.seed)?;
    if out.graph.degree_sequence() != g.degree_sequence() {
        return Err(Error::Invariant("tuning changed a degree".into()));
    }
    let meta = TuneMeta {
        target_clustering: a.target,
        tolerance: a.tolerance,
        seed: a.seed,
        nodes: out.graph.node_count(),
        edges: out.graph.edge_count(),
        clustering: out.clustering,
        accepted_swaps: out.accepted_swaps,
        proposals: out.proposals,
        best_effort: out.best_effort,
    };
    write_graph_with_meta(&out.graph, &a.out, &meta)?;
    println!("clustering_before={}", io::fmt_real(g.avg_clustering()));
    println!("clustering={}", io::fmt_real(out.clustering));
    println!("accepted_swaps={}", out.accepted_swaps);
    println!("best_effort={}", out.best_effort);
    Ok(())
}

fn cmd_plot(a: &PlotArgs) -> Result<()> {
    let stem = |p: &Path| p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let chart = match a.kind {
        PlotKind::Sweep => {
            let [input] = a.input.as_slice() else {
                return Err(Error::InvalidParams("sweep plots take exactly one --input".into()));
            };
            let agg = io::read_aggregate_csv(input)?;
            plot::sweep_chart(&agg, a.title.as_deref().unwrap_or(&stem(input)))
        }
        PlotKind::Curve => {
            let [input] = a.input.as_slice() else {
                return Err(Error::InvalidParams("curve plots take exactly one --input".into()));
            };
            let points = io::read_curve_csv(input)?;
            plot::curve_chart(&points, a.title.as_deref().unwrap_or(&stem(input)))
        }
        PlotKind::Cdf => {
            if !a.label.is_empty() && a.label.len() != a.input.len() {
                return Err(Error::InvalidParams("give one --label per --input".into()));
            }
            let cdfs = a
                .input
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let label = a.label.get(k).cloned().unwrap_or_else(|| stem(p));
                    Ok((label, io::read_cdf_csv(p)?))
                })
                .collect::<Result<Vec<_>>>()?;
            plot::cdf_chart(&cdfs, a.title.as_deref().unwrap_or("tie strength CDF"))
        }
    };
    fs::write(&a.out, chart.to_svg())?;
    println!("series={}", chart.series.len());
    Ok(())
}
