//! `lipcount` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::RunMeta;

#[derive(Parser, Debug)]
#[command(name = "lipcount", version, about = "Count integer Lipschitz functions on graphs and compute their growth constants")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Omit the timestamp and elapsed time so repeated runs are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and print it in edge-list form ("n k" header, then sorted "u v" lines).
    ///
    /// CSV columns: u, v.
    Generate(GraphSource),
    /// Exact counts |Lip(G; h)|, optionally with pinned values.
    ///
    /// CSV columns: h, count, node_expansions.
    Count(CountArgs),
    /// Interpolate the counting polynomial and estimate the growth constant.
    ///
    /// CSV columns: power, coefficient, approx.
    Ehrhart(EhrhartArgs),
    /// Transfer operators on grid strips.
    #[command(subcommand)]
    Strip(StripCommand),
    /// Scalar constants from root finding and integral operators.
    ///
    /// CSV columns: name, value, rounded, definition, method.
    Constants(ConstantsArgs),
    /// Finite-d bounds for sparse random graphs.
    ///
    /// CSV columns: d, lower_exact, lower_asymptotic, upper_exact, upper_asymptotic,
    /// lower_valid, upper_valid, upper_informative, margin, giant_fraction.
    Bounds(BoundsArgs),
    /// Monte-Carlo and exact experiments on random graphs.
    #[command(subcommand, name = "random-lab")]
    RandomLab(LabCommand),
    /// Recompute the headline constants with independent cross-checks.
    ///
    /// CSV columns: quantity, value, rounded, cross_check, method.
    #[command(name = "reproduce-abstract")]
    ReproduceAbstract(ReproduceArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    /// Random recursive tree drawn from --seed.
    Tree,
    /// Erdős–Rényi G(n, d/n) drawn from --seed.
    Er,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["family", "grid", "input"])))]
pub struct GraphSource {
    #[arg(long, value_enum, requires = "n")]
    family: Option<Family>,
    /// Vertex count for --family.
    #[arg(long)]
    n: Option<usize>,
    /// Expected degree for --family er.
    #[arg(long)]
    d: Option<f64>,
    /// Grid dimensions as ROWSxCOLS.
    #[arg(long, value_parser = parse_dims)]
    grid: Option<(usize, usize)>,
    /// Edge-list file.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    graph: GraphSource,
    /// Bounds, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
    /// Node-expansion budget for the search.
    #[arg(long, default_value_t = lipcount::exact::DEFAULT_BUDGET)]
    budget: u64,
    /// Pinned value VERTEX=VALUE (repeatable). Component roots are pinned to 0
    /// automatically.
    #[arg(long, value_parser = parse_pin)]
    pin: Vec<(usize, i64)>,
}

#[derive(Args, Debug)]
pub struct EhrhartArgs {
    #[command(flatten)]
    graph: GraphSource,
    #[arg(long, default_value_t = lipcount::exact::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Band,
    Tent,
    FreeStrip,
    PinnedStrip,
}

#[derive(Subcommand, Debug)]
pub enum StripCommand {
    /// Top eigenvalues and their extrapolated limit.
    ///
    /// CSV columns: kind, m, h, dimension, lambda, normalized, extrapolated, residual, iterations.
    Spectrum(SpectrumArgs),
    /// Exact counts on the ROWSxCOLS grid by transfer matrix.
    ///
    /// CSV columns: rows, cols, h, count.
    Count(StripCountArgs),
    /// Certified Rayleigh-quotient lower bound for the free strip.
    ///
    /// CSV columns: m, h, numerator, denominator, value, normalized.
    Rayleigh(RayleighArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Rows for free-strip and pinned-strip.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
    /// Relative tolerance on successive Rayleigh quotients.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = lipcount::power::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Largest admissible state-space dimension.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
}

#[derive(Args, Debug)]
pub struct StripCountArgs {
    #[arg(long, value_parser = parse_dims)]
    grid: (usize, usize),
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
    #[arg(long, default_value_t = lipcount::exact::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
pub struct RayleighArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Include the Nyström eigenvalues (slower).
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 2000)]
    nystrom_mesh: usize,
    #[arg(long, default_value_t = 64)]
    zeta_mesh: usize,
    #[arg(long, default_value_t = 32)]
    psi_mesh: usize,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Expected degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,50,100")]
    d: Vec<f64>,
    /// Also report 2 - 2^-18 eps^5.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum LabCommand {
    /// Sample the local-lemma recipe on G(n, d/n).
    ///
    /// CSV columns: batch, first_stream, trials, successes, edge_samples, edge_failures.
    Lll(LllArgs),
    /// Search for disjoint s-sets with no crossing edge over several seeds.
    ///
    /// CSV columns: seed, edges, outcome, a, b.
    Pairs(PairsArgs),
    /// Giant-component fraction against the fixed-point prediction.
    ///
    /// CSV columns: seed, giant_size, fraction.
    Giant(GiantArgs),
    /// Exact probability that |X1 + X2 + X3| <= 2h.
    ///
    /// CSV columns: h, success, value, gap_to_limit.
    Triple(TripleArgs),
    /// Growth-constant estimate for one sampled graph.
    ///
    /// CSV columns: h, count, normalized.
    CEmpirical(CEmpiricalArgs),
    /// High-degree vertex proportion against the tail bound.
    ///
    /// CSV columns: seed, threshold, fraction, tail_bound.
    Degrees(DegreesArgs),
}

#[derive(Args, Debug)]
pub struct LllArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    h: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 10)]
    batches: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Heuristic,
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    /// Set size; defaults to ceil(2 ln d / d * n).
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Number of consecutive seeds starting at --seed.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
}

#[derive(Args, Debug)]
pub struct GiantArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
}

#[derive(Args, Debug)]
pub struct TripleArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct CEmpiricalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    /// Bounds; exactly n - k + 1 of them switch to polynomial interpolation.
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct DegreesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: f64,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 64)]
    zeta_mesh: usize,
    #[arg(long, default_value_t = 32)]
    psi_mesh: usize,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("rows: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("cols: {e}"))?;
    Ok((a, b))
}

fn parse_pin(s: &str) -> Result<(usize, i64), String> {
    let (v, w) = s.split_once('=').ok_or_else(|| format!("expected VERTEX=VALUE, got {s:?}"))?;
    Ok((
        v.trim().parse().map_err(|e| format!("vertex: {e}"))?,
        w.trim().parse().map_err(|e| format!("value: {e}"))?,
    ))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(lipcount::Error),
    Io(std::io::Error),
}

impl From<lipcount::Error> for CliError {
    fn from(e: lipcount::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(lipcount::Error::InvalidArgument(_) | lipcount::Error::Parse { .. }) => 2,
            CliError::Core(lipcount::Error::ResourceLimit { .. }) => 3,
            CliError::Core(lipcount::Error::NonConvergence { .. }) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is configured once");
    }
    let start = Instant::now();
    match run(&cli, start) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli, start: Instant) -> Result<(), CliError> {
    let g = &cli.global;
    let out = commands::dispatch(&cli.command, g)?;
    let meta = if g.deterministic {
        RunMeta::default()
    } else {
        RunMeta {
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs()),
            elapsed_ms: Some(start.elapsed().as_millis()),
        }
    };
    let text = match out {
        commands::Output::Raw(s) => s,
        commands::Output::Report(r) => r.render(g.format, &meta),
    };
    match &g.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
