//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use subcut::Variant;

#[derive(Debug, Parser)]
#[command(name = "subcut", version, about = "Continuous cutting-plane optimization of generalized GMI networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance file.
    Generate(GenerateArgs),
    /// Dual bounds of classical GMI rounds.
    Baseline(BaselineArgs),
    /// Run the LP / gradient loop on one or more instances.
    Optimize(OptimizeArgs),
    /// Solve an instance exactly by branch and bound.
    SolveExact(SolveExactArgs),
    /// List the feasible integer points of a small instance as CSV.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Setcover,
    Indepset,
    Mixed,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Set cover: number of rows.
    #[arg(long, default_value_t = 20)]
    pub rows: usize,
    /// Set cover: number of columns.
    #[arg(long, default_value_t = 40)]
    pub cols: usize,
    /// Set cover: membership probability.
    #[arg(long, default_value_t = 0.2)]
    pub density: f64,
    /// Independent set: number of nodes.
    #[arg(long, default_value_t = 10)]
    pub nodes: usize,
    /// Independent set: edge probability.
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
    /// Mixed: number of rows.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Mixed: number of integer variables.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Mixed: number of continuous variables.
    #[arg(long, default_value_t = 2)]
    pub ncont: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Number of GMI rounds K.
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    /// Cuts kept per round; a single value is used for every round.
    #[arg(long, default_value = "32")]
    pub widths: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Gmi)]
    pub variant: VariantArg,
    /// Checkpoint of the warm-start network.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Node budget for computing the optimum when the file has none.
    #[arg(long, default_value_t = 100_000)]
    pub node_limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    Gmi,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Gmi,
    Log,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Gmi => Variant::Gmi,
            VariantArg::Log => Variant::Log,
        }
    }
}

/// Every option is optional here so that a `--config` file can fill gaps;
/// defaults are applied after merging.
#[derive(Debug, Args, Default)]
pub struct OptimizeArgs {
    /// Instance file; repeat for a batch.
    #[arg(long)]
    pub instance: Vec<PathBuf>,
    /// JSON file supplying any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated layer widths (default 32).
    #[arg(long)]
    pub widths: Option<String>,
    /// Initial network (default gmi).
    #[arg(long, value_enum)]
    pub init: Option<Init>,
    /// Layer variant (default gmi).
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Gradient step size (default 1e-3).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Noise standard deviation on the LP optimum (default 1e-4).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Total gradient-step budget.
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Gradient steps per outer iteration (default 1000).
    #[arg(long)]
    pub max_inner: Option<usize>,
    /// LP solves allowed (default 1000).
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// Relative best-bound improvement counted as progress (default 1e-6).
    #[arg(long)]
    pub conv_tol: Option<f64>,
    /// Trace records the improvement is measured over (default 50).
    #[arg(long)]
    pub conv_window: Option<usize>,
    /// Noise and random-init seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trace CSV path (a directory for batches).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Best-network checkpoint path (a directory for batches).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Node budget for computing the optimum when the file has none.
    #[arg(long)]
    pub node_limit: Option<usize>,
    /// Worker processes for batches.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Fill the trace's seconds column (makes traces non-reproducible).
    #[arg(long)]
    pub time: bool,
}

#[derive(Debug, Args)]
pub struct SolveExactArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub node_limit: usize,
    /// Store the optimum as `known_optimum` in the instance file.
    #[arg(long)]
    pub write_back: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Per-variable upper bound of the enumeration box.
    #[arg(long, default_value_t = 3)]
    pub bound: u32,
    /// CSV output; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_widths(text: &str) -> Result<Vec<usize>, String> {
    let widths = text
        .split(',')
        .map(|w| w.trim().parse::<usize>().map_err(|e| format!("bad width `{w}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if widths.is_empty() || widths.contains(&0) {
        return Err("widths must be a nonempty list of positive counts".into());
    }
    Ok(widths)
}
