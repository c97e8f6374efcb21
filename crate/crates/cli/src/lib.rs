//! Command-line experiments over the `mcentrality` library.
//!
//! The binary is a thin wrapper around [`run`], which lets tests drive
//! every command in-process.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use mcentrality::{EfficiencyNorm, Method, Preference, ThresholdFormula};

mod commands;
pub mod config;
pub mod output;

use config::Config;
use output::{Format, Precision, Sink};

#[derive(Debug, Parser)]
#[command(name = "mcent", version, about = "Rank influential nodes and evaluate the rankings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// TOML file supplying defaults for any option below.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Significant digits for real numbers [default: 6].
    #[arg(long, global = true, value_name = "DIGITS", conflicts_with = "decimals")]
    pub precision: Option<usize>,
    /// Fixed number of decimals instead of significant digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    pub decimals: Option<usize>,
    /// Write one file per table here instead of printing to stdout.
    #[arg(long, global = true, env = "MCENT_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size, degree moments, coreness and epidemic threshold of a network.
    Stats(StatsArgs),
    /// Score and rank nodes with one or more methods.
    Rank(RankArgs),
    /// Top nodes under M-Centrality for several weights.
    MuSweep(MuSweepArgs),
    /// Remove top-ranked nodes and track efficiency and fragmentation.
    Attack(AttackArgs),
    /// Kendall tau between each method and SIR spreading influence.
    Sir(SirArgs),
    /// Rank-biased overlap between one method and others.
    Rbo(RboArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GraphArgs {
    /// Whitespace-separated edge list, one edge per line.
    pub input: Option<PathBuf>,
    /// Restrict to the largest connected component (default).
    #[arg(long, overrides_with = "no_lcc")]
    pub lcc: bool,
    /// Keep every component.
    #[arg(long)]
    pub no_lcc: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Fixed M-Centrality weight in [0, 1] instead of the entropy weight.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Gravity truncation radius [default: 3].
    #[arg(long)]
    pub radius: Option<usize>,
    /// Collective Influence ball radius [default: 3].
    #[arg(long)]
    pub ell: Option<usize>,
    /// PageRank teleport probability [default: 0.15].
    #[arg(long)]
    pub teleport: Option<f64>,
    /// PageRank teleport target: degree or uniform [default: degree].
    #[arg(long)]
    pub preference: Option<Preference>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StatsArgs {
    pub input: Option<PathBuf>,
    /// hmf or hmf_corrected [default: hmf_corrected].
    #[arg(long)]
    pub threshold: Option<ThresholdFormula>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated methods [default: m].
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<Method>,
    /// Only print the first K rows.
    #[arg(long, value_name = "K")]
    pub top: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MuSweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated weights [default: 0,0.25,0.5,0.75,1].
    #[arg(long, value_delimiter = ',')]
    pub mu: Vec<f64>,
    /// Rank positions per column [default: 15].
    #[arg(long, value_name = "K")]
    pub top: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated methods [default: m,gravity,dil,clusterrank,ppr,ci].
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<Method>,
    /// Nodes to remove [default: 15].
    #[arg(long)]
    pub steps: Option<usize>,
    /// File of node labels giving the removal order; replaces --method.
    #[arg(long, value_name = "FILE")]
    pub order: Option<PathBuf>,
    /// Node count used after removal: residual or original [default: residual].
    #[arg(long)]
    pub norm: Option<EfficiencyNorm>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SirArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated methods [default: m,gravity,dil,clusterrank,ppr,ci].
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<Method>,
    /// Infection rates as fractions of the epidemic threshold
    /// [default: 0.2,0.4,...,1.6].
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub beta_frac: Vec<f64>,
    /// Simulations per seed node [default: 100].
    #[arg(long)]
    pub runs: Option<usize>,
    /// Master random seed [default: 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// hmf or hmf_corrected [default: hmf_corrected].
    #[arg(long)]
    pub threshold: Option<ThresholdFormula>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RboArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Reference method [default: m].
    #[arg(long)]
    pub method: Option<Method>,
    /// Comma-separated methods to compare with [default: the other baselines].
    #[arg(long, value_delimiter = ',')]
    pub against: Vec<Method>,
    /// Comma-separated persistence values [default: 0.4,0.5,...,0.9].
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub p: Vec<f64>,
    /// Evaluation depth [default: number of nodes].
    #[arg(long)]
    pub depth: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
}

/// Invalid invocation detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Process exit status for an error: 2 usage, 3 malformed input, 4 empty graph, 1 anything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<mcentrality::Error>() {
            return match e {
                mcentrality::Error::Parse { .. } => 3,
                mcentrality::Error::EmptyGraph => 4,
                _ => 1,
            };
        }
    }
    1
}

/// Settings shared by every command after merging flags over the config file.
pub(crate) struct Context {
    pub cfg: Config,
    pub sink: Sink,
}

/// Runs one command, writing results to `stdout` or the output directory.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = match &cli.global.config {
        Some(path) => Config::load(path).map_err(|e| usage(format!("{e:#}")))?,
        None => Config::default(),
    };
    let g = &cli.global;
    let precision = match (g.precision, g.decimals, cfg.precision, cfg.decimals) {
        (Some(p), _, _, _) => Precision::Significant(p),
        (None, Some(d), _, _) => Precision::Decimals(d),
        (None, None, Some(p), _) => Precision::Significant(p),
        (None, None, None, Some(d)) => Precision::Decimals(d),
        _ => Precision::default(),
    };
    if let Precision::Significant(0) = precision {
        return Err(usage("--precision must be at least 1"));
    }
    let sink = Sink {
        format: g.format.or(cfg.format).unwrap_or_default(),
        precision,
        out_dir: g.out_dir.clone().or_else(|| cfg.out_dir.clone()),
    };
    let threads = g.threads.or(cfg.threads);
    let ctx = Context { cfg, sink };

    let build = || commands::build(&ctx, &cli.command);
    let tables = match threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(build)?,
        None => build()?,
    };
    ctx.sink.emit(&tables, stdout)?;
    Ok(())
}
