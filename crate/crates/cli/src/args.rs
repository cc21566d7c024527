use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cubic-kuramoto",
    version,
    about = "Stable patterns of the Kuramoto flow on cubic graphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Master seed for trial sampling.
    #[arg(long, global = true, default_value_t = 0, env = "CUBIC_KURAMOTO_SEED")]
    pub seed: u64,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    DoubleRing,
    Moebius,
    Twisted,
    HighE,
    HighF,
    Chain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo pattern search over every record of a graph6 file.
    Search(SearchArgs),
    /// Build a graph family member and its closed-form pattern.
    Construct(ConstructArgs),
    /// Recheck a pattern file against a graph.
    Verify(VerifyArgs),
    /// Pattern-count table from a directory of search reports.
    Stats(ReportsArgs),
    /// Per-pattern scatter data with cluster labels and the energy fit.
    Figure(FigureArgs),
    /// Trace a pattern along the edge-weight homotopy from graph A to B.
    Continue(ContinueArgs),
    /// Print every closed-form value with its residual.
    VerifyAnalytic(VerifyAnalyticArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Trials per graph; defaults to 5000 for n <= 12 and 10000 above.
    #[arg(long = "ksamp")]
    pub k_samp: Option<usize>,
    /// Only the first M records.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Directory for per-graph reports, the aggregate CSV and metadata.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, env = "CUBIC_KURAMOTO_RESIDUAL_TOL", default_value_t = 1e-5)]
    pub residual_tol: f64,
    #[arg(long, env = "CUBIC_KURAMOTO_DEDUP_TOL", default_value_t = 1e-6)]
    pub dedup_energy_tol: f64,
    #[arg(long, env = "CUBIC_KURAMOTO_T_MAX", default_value_t = 2000.0)]
    pub t_max: f64,
    /// Skip Newton refinement.
    #[arg(long)]
    pub no_refine: bool,
    /// Count only strictly stable points (drop negative-semidefinite ones).
    #[arg(long)]
    pub strict: bool,
    /// Energy gap separating clusters in the aggregate CSV.
    #[arg(long, default_value_t = cubic_kuramoto::search::DEFAULT_CLUSTER_GAP)]
    pub cluster_gap: f64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// graph6 output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Pattern JSON output, for families with a closed-form pattern.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub pattern: PathBuf,
    /// Verdict JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportsArgs {
    #[arg(long)]
    pub reports: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub reports: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = cubic_kuramoto::search::DEFAULT_CLUSTER_GAP)]
    pub cluster_gap: f64,
}

#[derive(Debug, Args)]
pub struct ContinueArgs {
    #[arg(long)]
    pub graph_a: PathBuf,
    #[arg(long)]
    pub graph_b: PathBuf,
    /// Pattern JSON (or a bare `{"theta": [...]}`) of a fixed point of A.
    #[arg(long)]
    pub start: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p_to: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write every theta along the branch as JSON.
    #[arg(long)]
    pub path_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyAnalyticArgs {
    /// JSON output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
