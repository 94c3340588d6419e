//! `tessgraph`: generate frames, analyze windows, sweep parameters and verify fixtures.
//!
//! Exit codes: 0 ok, 2 bad configuration, 3 generator or geometry failure, 4 identity
//! failure, 5 empty window.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tessgraph::estimate::EstimateError;
use tessgraph::experiment::{analyze_disc, replicate, sweep, CheckSet, ExperimentError, ExperimentSpec, SweepSpec, SWEEP_COLUMNS};
use tessgraph::faces::faces_of;
use tessgraph::generators::{generate, GeneratorConfig, GeneratorError, Model};
use tessgraph::svg;
use tessgraph::verify::verify_fixtures;
use tessgraph::{GeometricGraph, Window};

#[derive(Parser)]
#[command(name = "tessgraph", version, about = "Planar tessellation frames and their mean-value statistics")]
struct Cli {
    /// Directory for outputs written without an explicit --out.
    #[arg(long, global = true, env = "TESSGRAPH_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the graph JSON of a generator configuration.
    Generate(GenerateArgs),
    /// Analyze a graph file in a disc, or a configuration over several seeds.
    Analyze(AnalyzeArgs),
    /// Run a configuration over a grid of q or r values and write one CSV row per seed.
    Sweep(SweepArgs),
    /// Check the exact fixtures against their known values.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured radius.
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph JSON to analyze in the disc of radius --r about the origin.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    graph: Option<PathBuf>,
    /// Generator configuration to run for --reps consecutive seeds.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Also draw the (first) frame to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Comma-separated subset of identities, formulas, eq13, recip-area; or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep specification JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Overrides the number of seeds per value.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
    fn generator(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
    fn identity(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Config(_) => Failure::config(e.to_string()),
            _ => Failure::generator(e.to_string()),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(_) => Failure::config(e.to_string()),
            ExperimentError::Generator(g) => g.into(),
            ExperimentError::Estimate(EstimateError::EmptyWindow(_)) => Failure { code: 5, message: e.to_string() },
            _ => Failure::generator(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::generator(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::generator(format!("cannot write {}: {e}", path.display())))
}

fn load_config(path: &Path, seed: Option<u64>, r: Option<f64>) -> Result<GeneratorConfig, Failure> {
    let mut cfg = GeneratorConfig::from_json(&read(path)?)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = r {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Failure::config(format!("r must be positive, got {r}")));
        }
        cfg.r = r;
    }
    Ok(cfg)
}

fn model_name(m: &Model) -> &'static str {
    match m {
        Model::PoissonDeleted(_) => "poisson_deleted",
        Model::FallingLeaves(_) => "falling_leaves",
        Model::Hexagon(_) => "hexagon",
        Model::Fig4a(_) => "fig4a",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_generate(out_dir: &Path, a: GenerateArgs) -> Outcome {
    let cfg = load_config(&a.config, a.seed, a.r)?;
    let g = generate(&cfg)?.graph;
    let out = a.out.unwrap_or_else(|| out_dir.join(format!("{}-{}.graph.json", model_name(&cfg.model), cfg.seed)));
    write(&out, &g.to_json())?;
    eprintln!("wrote {} ({} nodes, {} links)", out.display(), g.node_count(), g.link_count());
    Ok(())
}

fn write_svg(path: &Path, g: &GeometricGraph, window: &Window) -> Outcome {
    let faces = faces_of(g).map_err(|e| Failure::generator(e.to_string()))?;
    write(path, &svg::render(g, &faces, Some(window)))
}

fn cmd_analyze(out_dir: &Path, a: AnalyzeArgs) -> Outcome {
    let checks = CheckSet::parse(&a.checks)?;
    if a.reps == 0 {
        return Err(Failure::config("reps must be at least 1"));
    }
    if let Some(path) = &a.graph {
        let r = a.r.ok_or_else(|| Failure::config("--graph needs --r"))?;
        if a.reps != 1 {
            return Err(Failure::config("--reps applies to --config runs only"));
        }
        let g = GeometricGraph::from_json(&read(path)?).map_err(|e| Failure::config(format!("bad graph file: {e}")))?;
        let window = Window::centered(r).map_err(|e| Failure::config(e.to_string()))?;
        let seed = a.seed.unwrap_or(0);
        let analysis = analyze_disc(&g, r, seed, checks)?;
        let out = a.out.unwrap_or_else(|| out_dir.join("analysis.json"));
        write(&out, &to_json(&analysis))?;
        if let Some(svg_path) = &a.svg {
            write_svg(svg_path, &g, &window)?;
        }
        if !analysis.identities_pass() {
            return Err(Failure::identity(format!("identity check failed; see {}", out.display())));
        }
        return Ok(());
    }

    let cfg = load_config(a.config.as_deref().expect("clap requires --graph or --config"), a.seed, a.r)?;
    let spec = ExperimentSpec { config: cfg, reps: a.reps, jobs: a.jobs, checks };
    let rep = replicate(&spec)?;
    let out = a.out.unwrap_or_else(|| out_dir.join(format!("{}-{}.analysis.json", model_name(&spec.config.model), spec.config.seed)));
    write(&out, &to_json(&rep))?;
    if let Some(svg_path) = &a.svg {
        let g = generate(&spec.config)?;
        write_svg(svg_path, &g.graph, &spec.config.window())?;
    }
    if rep.summary.failed == rep.summary.reps {
        // Every seed failed the same way for a single rep; otherwise report the first error.
        let first = rep.outcomes.iter().find_map(|o| o.error.clone()).unwrap_or_default();
        let code = if first.starts_with("empty window") { 5 } else { 3 };
        return Err(Failure { code, message: first });
    }
    if !rep.summary.identities_pass {
        return Err(Failure::identity(format!("identity check failed; see {}", out.display())));
    }
    eprintln!("wrote {} ({} of {} seeds analyzed)", out.display(), rep.summary.reps - rep.summary.failed, rep.summary.reps);
    Ok(())
}

fn cmd_sweep(out_dir: &Path, a: SweepArgs) -> Outcome {
    let mut spec = SweepSpec::from_json(&read(&a.config)?)?;
    if let Some(reps) = a.reps {
        if reps == 0 {
            return Err(Failure::config("reps must be at least 1"));
        }
        spec.reps = reps;
    }
    if let Some(c) = &a.checks {
        spec.checks = CheckSet::parse(c)?;
    }
    let rows = sweep(&spec, a.jobs)?;
    let out = a.out.unwrap_or_else(|| out_dir.join("sweep.csv"));
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::generator(e.to_string());
    w.write_record(SWEEP_COLUMNS).map_err(csv_err)?;
    for row in &rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::generator(e.to_string()))?;
    write(&out, &String::from_utf8(bytes).expect("csv output is utf-8"))?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("wrote {} ({} rows, {failed} with errors)", out.display(), rows.len());
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let items = verify_fixtures()?;
    for it in &items {
        println!("{} {}: {}", if it.pass { "PASS" } else { "FAIL" }, it.name, it.detail);
    }
    if let Some(out) = &a.out {
        write(out, &to_json(&items))?;
    }
    match items.iter().filter(|i| !i.pass).count() {
        0 => Ok(()),
        n => Err(Failure::identity(format!("{n} fixture check(s) failed"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&cli.out_dir, a),
        Command::Analyze(a) => cmd_analyze(&cli.out_dir, a),
        Command::Sweep(a) => cmd_sweep(&cli.out_dir, a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
