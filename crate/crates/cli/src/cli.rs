use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Convex graph invariants and the experiment harnesses built on them.
///
/// Graphs are builtin specs (`cycle:16`, `chorded-cycle:16`, `path:16`,
/// `clique:4`, `rook:4`, `clebsch`, `shrikhande`, ...) or `file:PATH` in the
/// dense text format. Constraint configs are JSON files or one of the
/// builtin presets `preset:expander`, `preset:cycle-family-16`,
/// `preset:connected-family-16`.
#[derive(Debug, Parser)]
#[command(name = "cvxgraph", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one invariant of a graph.
    Invariant(InvariantArgs),
    /// Recover two relabeled graphs from their sum, over random trials.
    Deconvolve(DeconvolveArgs),
    /// Sample graphs from a constraint set by maximizing random functionals.
    Generate(GenerateArgs),
    /// Decide which of two constraint families better explains a graph.
    Hypotest(HypotestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InvariantName {
    Edges,
    Maxdeg,
    Maxcut,
    /// Semidefinite upper bound on the maximum cut.
    MaxcutSdp,
    Cheeger,
    Stability,
    /// Motzkin–Straus value, the inverse stability number.
    Motzkin,
    /// Exact elementary invariant for `--pattern`.
    Theta,
    /// Spectral upper bound on `theta` for `--pattern`.
    LambdaBound,
    Fiedler,
    Degseq,
    Spectrum,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Iteration cap of the command's main loop.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Stopping tolerance of the command's main loop.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Write 0 in the elapsed_ms column so the CSV is byte-stable.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum)]
    pub name: InvariantName,
    /// Pattern graph for `theta` and `lambda-bound`.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Seed for randomized restarts (`motzkin`).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct DeconvolveArgs {
    #[arg(long)]
    pub g1: String,
    #[arg(long)]
    pub g2: String,
    /// Skip the random relabelings.
    #[arg(long)]
    pub identity: bool,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub constraints: String,
    /// Directory receiving one graph file per trial.
    #[arg(long)]
    pub emit_graph: Option<PathBuf>,
    #[command(flatten)]
    pub trials: TrialArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct HypotestArgs {
    /// The sample graph.
    #[arg(long)]
    pub graph: String,
    /// The two family configs, in order.
    #[arg(long, num_args = 2, value_names = ["FAMILY1", "FAMILY2"], required = true)]
    pub constraints: Vec<String>,
    /// Directory receiving the two maximizers as `m1.txt` and `m2.txt`.
    #[arg(long)]
    pub emit_graph: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}
