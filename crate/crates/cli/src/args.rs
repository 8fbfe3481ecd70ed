use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "netsparse", version, about = "Network sparsification by algebraic distance")]
pub struct Cli {
    /// Worker threads; overrides NETSPARSE_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic graph.
    Gen(GenArgs),
    /// Single-level sparsification.
    Sparsify(SparsifyArgs),
    /// Multilevel sparsification over a coarsening hierarchy.
    MlSparsify(MlArgs),
    /// Compare a sparsified graph against its original.
    Compare(CompareArgs),
    /// Time sparsification on generated graphs of increasing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    Edgelist,
    Mtx,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Disjoint cliques joined by bridge edges.
    Planted {
        #[arg(long, default_value_t = 3)]
        clusters: usize,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        bridges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        output: PathBuf,
    },
    /// Connected random graph: random spanning tree plus uniform extra edges.
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    KeepStrong,
    KeepWeak,
    Mixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScorerArg {
    Algdist,
    LocalDegree,
    Jaccard,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct AlgDistArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Number of random test vectors.
    #[arg(long, default_value_t = 10)]
    pub sweeps: usize,
    /// Relaxation steps per test vector.
    #[arg(long, default_value_t = 40)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    /// Divide each score by sqrt(d_i d_j).
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args)]
pub struct SparsifyArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::KeepStrong)]
    pub mode: ModeArg,
    /// Retention exponent: each node nominates ceil(d^e) edges.
    #[arg(long = "e", alias = "exponent", default_value_t = 0.5)]
    pub exponent: f64,
    #[arg(long, value_enum, default_value_t = ScorerArg::Algdist)]
    pub scorer: ScorerArg,
    #[command(flatten)]
    pub algdist: AlgDistArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run this many consecutive seeds and report each plus the mean.
    #[arg(long, default_value_t = 1)]
    pub repetitions: usize,
    /// Also compute the comparison report for every run.
    #[arg(long)]
    pub compare: bool,
    /// Write `u v score` lines for the first run.
    #[arg(long)]
    pub scores_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Coarsest,
    Middle,
    Finest,
}

#[derive(Debug, Args)]
pub struct MlArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Per-level exponents, coarsest level first; -1 skips a level.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    pub levels: Option<String>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// Number of levels a preset sparsifies.
    #[arg(long, default_value_t = 3)]
    pub span: usize,
    /// Exponent for preset levels when no target ratio is given.
    #[arg(long = "e", alias = "exponent", default_value_t = 0.5)]
    pub exponent: f64,
    /// Fit one shared exponent so the edge ratio lands in `lo,hi`.
    #[arg(long)]
    pub target_ratio: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub coarsest_size: usize,
    #[arg(long, default_value_t = 0.5)]
    pub coupling: f64,
    #[command(flatten)]
    pub algdist: AlgDistArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the per-level `level n m seeds` summary here.
    #[arg(long)]
    pub hierarchy_out: Option<PathBuf>,
    /// Write every level's graph as `level-<k>.el` into this directory.
    #[arg(long)]
    pub level_graphs: Option<PathBuf>,
    #[arg(long)]
    pub compare: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub original: PathBuf,
    pub sparse: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Betweenness sources per repetition (default max(100, sqrt n)).
    #[arg(long)]
    pub pivots: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub repetitions: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Append a table row here, writing the header if the file is new.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value = "graph")]
    pub graph_name: String,
    #[arg(long, default_value = "G")]
    pub level_tag: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchAlgorithm {
    Sparsify,
    MlSparsify,
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10_000)]
    pub min_edges: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_edges: usize,
    /// Sizes sampled geometrically between the bounds.
    #[arg(long, default_value_t = 6)]
    pub points: usize,
    /// Edges per node of the generated graphs.
    #[arg(long, default_value_t = 5)]
    pub density: usize,
    #[arg(long, value_enum, default_value_t = BenchAlgorithm::Both)]
    pub algorithm: BenchAlgorithm,
    /// Comma separated thread counts timed on the largest graph.
    #[arg(long)]
    pub threads_sweep: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
