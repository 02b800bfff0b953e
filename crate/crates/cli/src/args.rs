use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

const LONG_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (", env!("DPSUB_BUILD"), ")");

#[derive(Debug, Parser)]
#[command(name = "dpsub", version, long_version = LONG_VERSION)]
#[command(about = "Private sublinear-time graph estimators and their audits")]
pub struct Cli {
    /// Write machine-readable JSON to stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Report wall_time_ms as 0 so repeated runs give identical output.
    #[arg(long, global = true)]
    pub no_timing: bool,

    /// Worker threads for trial fan-out; 1 runs sequentially.
    #[arg(long, global = true, env = "DPSUB_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic graph and write it as an edge list.
    Gen(GenArgs),
    /// Private average-degree estimate.
    Avgdeg(AvgdegArgs),
    /// Maximum-matching size estimate.
    Matching(SizeArgs),
    /// Minimum-vertex-cover size estimate.
    Vc(SizeArgs),
    /// Sensitivity and privacy audits on small instances.
    Audit(AuditArgs),
    /// Repeated seeded trials of one estimator.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Gnp,
    DRegular,
    Star,
    Path,
    Complete,
    PerfectMatching,
    Empty,
}

/// Where the input graph comes from: a file, or a generator.
#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    /// Edge-list file.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for gnp.
    #[arg(long)]
    pub p: Option<f64>,
    /// Degree for d-regular.
    #[arg(long)]
    pub d: Option<usize>,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AvgdegArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long)]
    pub rho: f64,
    /// Bucket ratio; defaults to rho/8.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Privacy budget, or `inf` for the noise-free baseline.
    #[arg(long, value_parser = parse_eps)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long)]
    pub rho: f64,
    /// Privacy budget; omit (or pass `inf`) for the non-private estimator.
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    GreedyCgs,
    MatchedSet,
    Stages,
    Privacy,
    Alpha,
    Doctor,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Largest graph size swept (greedy-cgs, matched-set) or instance size
    /// (stages).
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Rankings per graph, instances, draws per side, or repetitions,
    /// depending on the suite.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorKind {
    Avgdeg,
    Matching,
    Vc,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, value_enum, default_value = "avgdeg")]
    pub estimator: EstimatorKind,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Privacy budget; `inf` (or omitted) means no noise.
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact value to score against; defaults to what the graph source
    /// determines (exact average degree, or the closed-form matching or
    /// cover size of the family).
    #[arg(long)]
    pub reference: Option<f64>,
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let v = match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|e| format!("{e}"))?,
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("epsilon must be positive or inf, got {s}"))
    }
}
