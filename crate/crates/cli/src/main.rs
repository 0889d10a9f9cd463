//! `curvbridge` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 audit failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use curvbridge::analysis::{
    analyze_edges, audit_analyses, compute_bands, compute_edge_reports, summarize, write_bands_csv,
    write_reports_csv, write_summary_json, EdgeReport, ReportOptions, AUDIT_TOL,
};
use curvbridge::generators::{generate, ModelSpec};
use curvbridge::graph::{load_edge_list, write_edge_list, LoadOptions, LoadedGraph};
use curvbridge::transfer::{Direction, TransferBand};
use curvbridge::{AlphaProfile, Error};

#[derive(Parser, Debug)]
#[command(name = "curvbridge", version, about = "Edgewise BF and OR curvature with transfer bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a synthetic graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Per-edge curvature, bounds, and bands as CSV.
    Curvature(CurvatureArgs),
    /// Transfer bands at a fixed level or at each edge's own curvature.
    Transfer(TransferArgs),
    /// Distribution summary as JSON.
    Summarize(SummarizeArgs),
    /// Check every bound against exact OR curvature.
    Audit(AuditArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// er, ba, ws, rgg, regular, hrg, sbm, cycle, grid, torus, tree, complete
    #[arg(long)]
    model: String,
    /// Comma-separated key=value pairs, e.g. `n=800,p=0.01`.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the periodic metric for `rgg`.
    #[arg(long)]
    torus_metric: bool,
    /// Output path, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Laziness profile: `default` or `const:<x>`.
    #[arg(long, default_value = "default", value_parser = parse_alpha)]
    alpha: AlphaProfile,
    /// Drop duplicate edges with a warning instead of failing.
    #[arg(long)]
    dedup: bool,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[command(flatten)]
    input: GraphArgs,
    /// Solve the transport problem for exact OR curvature.
    #[arg(long)]
    exact_or: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("at").required(true).args(["level", "per_edge"])))]
struct TransferArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long)]
    direction: Direction,
    /// Input curvature level applied to every edge.
    #[arg(long, allow_hyphen_values = true)]
    level: Option<f64>,
    /// Use each edge's own source curvature as the level.
    #[arg(long)]
    per_edge: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SummarizeArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[arg(long)]
    exact_or: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    input: GraphArgs,
}

fn parse_alpha(s: &str) -> Result<AlphaProfile, String> {
    AlphaProfile::parse(s).map_err(|e| e.to_string())
}

/// Failure of a subcommand, mapped to its exit code.
enum Failure {
    Usage(String),
    Data(Error),
    Audit,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(args: &GraphArgs) -> Result<LoadedGraph, Error> {
    let shown = args.graph.display().to_string();
    let file = File::open(&args.graph).map_err(|e| Error::io(&shown, e))?;
    let loaded = load_edge_list(BufReader::new(file), LoadOptions { dedup: args.dedup }).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{shown}: {msg}"),
        },
        other => other,
    })?;
    if !loaded.is_identity() {
        log::info!(
            "{shown}: {} vertex ids remapped to 0..{}; output uses the original ids",
            loaded.original_ids.len(),
            loaded.original_ids.len()
        );
    }
    Ok(loaded)
}

/// Opens `path` for writing; `-` is stdout.
fn create(path: &Path) -> Result<Box<dyn Write>, Error> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn write_to(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Error> {
    let mut out = create(path)?;
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Maps dense vertex ids back to the ids of the input file. The mapping is
/// increasing, so canonical edge order is preserved.
fn restore_report_ids(reports: &mut [EdgeReport], loaded: &LoadedGraph) {
    if loaded.is_identity() {
        return;
    }
    for r in reports {
        r.u = loaded.original_ids[r.u] as usize;
        r.v = loaded.original_ids[r.v] as usize;
    }
}

fn restore_band_ids(bands: &mut [TransferBand], loaded: &LoadedGraph) {
    if loaded.is_identity() {
        return;
    }
    for b in bands {
        b.edge.u = loaded.original_ids[b.edge.u] as usize;
        b.edge.v = loaded.original_ids[b.edge.v] as usize;
    }
}

fn run_generate(a: GenerateArgs) -> Outcome {
    let spec = ModelSpec::parse(&a.model, &a.params, a.torus_metric)?;
    let g = generate(&spec, a.seed)?;
    write_to(&a.out, |out| {
        writeln!(out, "# model: {}", spec.name())?;
        writeln!(out, "# params: {}", spec.params_string())?;
        writeln!(out, "# seed: {}", a.seed)?;
        write_edge_list(&g, out)
    })?;
    log::info!("{spec}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
    Ok(())
}

fn run_curvature(a: CurvatureArgs) -> Outcome {
    let loaded = load(&a.input)?;
    let opts = ReportOptions {
        exact_or: a.exact_or,
        profile: a.input.alpha,
        ..ReportOptions::default()
    };
    let mut reports = compute_edge_reports(&loaded.graph, &opts)?;
    restore_report_ids(&mut reports, &loaded);
    write_to(&a.out, |out| write_reports_csv(&reports, out))?;
    Ok(())
}

fn run_transfer(a: TransferArgs) -> Outcome {
    let loaded = load(&a.input)?;
    let level = if a.per_edge { None } else { a.level };
    let mut bands = compute_bands(&loaded.graph, a.direction, level, a.input.alpha)?;
    restore_band_ids(&mut bands, &loaded);
    write_to(&a.out, |out| write_bands_csv(&bands, out))?;
    Ok(())
}

fn run_summarize(a: SummarizeArgs) -> Outcome {
    let loaded = load(&a.input)?;
    let opts = ReportOptions {
        exact_or: a.exact_or,
        profile: a.input.alpha,
        ..ReportOptions::default()
    };
    let reports = compute_edge_reports(&loaded.graph, &opts)?;
    let stats = summarize(&reports)?;
    write_to(&a.out, |out| write_summary_json(&stats, out))?;
    Ok(())
}

fn run_audit(a: AuditArgs) -> Outcome {
    let loaded = load(&a.input)?;
    let analyses = analyze_edges(&loaded.graph, true, a.input.alpha)?;
    let rep = audit_analyses(&analyses, AUDIT_TOL);
    let id = |v: usize| loaded.original_ids[v];
    for v in &rep.violations {
        println!(
            "VIOLATION ({}, {}) {}: {} > {}",
            id(v.edge.u),
            id(v.edge.v),
            v.check,
            v.lhs,
            v.rhs
        );
    }
    println!(
        "audited {} edges ({} with both degrees >= 2): {} violations",
        rep.edges,
        rep.sandwich_edges,
        rep.violations.len()
    );
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Audit)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Curvature(a) => run_curvature(a),
        Command::Transfer(a) => run_transfer(a),
        Command::Summarize(a) => run_summarize(a),
        Command::Audit(a) => run_audit(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Audit) => ExitCode::from(3),
    }
}
