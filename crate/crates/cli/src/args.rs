use std::path::PathBuf;

use batchlp::batch::DEFAULT_MEMORY_BUDGET;
use batchlp::{BatchConfig, SolverLimits};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

/// Batched dense LP solver.
///
/// Every flag can also be set through an environment variable named after
/// it, uppercased and prefixed with `BATCHLP_` (for example
/// `BATCHLP_WORKERS=4`). Exit status is 0 on success, 1 on input errors and
/// 2 when a verification check fails.
#[derive(Debug, Parser)]
#[command(name = "batchlp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one MPS file and certify the result.
    Solve(SolveArgs),
    /// Solve many MPS files, or a generated workload, as one batch.
    Batch(BatchArgs),
    /// Print a generated workload.
    Gen(GenArgs),
    /// Time batch solves over a sweep of dimensions and batch sizes.
    Bench(BenchArgs),
    /// Cross-check solver outcomes against the brute-force oracles.
    Verify(BatchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, env = "BATCHLP_INPUT")]
    pub input: PathBuf,
    #[arg(long, env = "BATCHLP_FORMAT", value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Pivot limit per phase; the default is 50·(m+n).
    #[arg(long, env = "BATCHLP_LIMITS_MAX_ITERS")]
    pub limits_max_iters: Option<usize>,
}

impl LimitArgs {
    pub fn limits(&self) -> SolverLimits {
        match self.limits_max_iters {
            Some(max) => SolverLimits::default().with_max_iterations(max),
            None => SolverLimits::default(),
        }
    }
}

#[derive(Debug, Args)]
pub struct WorkloadArgs {
    /// LP dimension: `dim` constraints over `dim` variables.
    #[arg(long, env = "BATCHLP_DIM", default_value_t = 5)]
    pub dim: usize,
    #[arg(long, env = "BATCHLP_COUNT", default_value_t = 100)]
    pub count: usize,
    #[arg(long, env = "BATCHLP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// `false` negates every right-hand side so phase 1 is needed.
    #[arg(long, env = "BATCHLP_FEASIBLE_START", default_value_t = true, action = ArgAction::Set)]
    pub feasible_start: bool,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[arg(long, env = "BATCHLP_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Bytes of tableau storage available to one chunk.
    #[arg(long, env = "BATCHLP_MEMORY_BUDGET", default_value_t = DEFAULT_MEMORY_BUDGET)]
    pub memory_budget: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
}

impl PoolArgs {
    pub fn config(&self) -> BatchConfig {
        BatchConfig {
            limits: self.limits.limits(),
            ..BatchConfig::default()
                .with_workers(self.workers)
                .with_memory_budget(self.memory_budget)
        }
    }
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// MPS files; when absent a workload is generated.
    #[arg(long, env = "BATCHLP_INPUT", num_args = 1.., value_delimiter = ',')]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub workload: WorkloadArgs,
    #[command(flatten)]
    pub pool: PoolArgs,
    #[arg(long, env = "BATCHLP_FORMAT", value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub workload: WorkloadArgs,
    /// `json` prints one array; `text` prints one LP per line.
    #[arg(long, env = "BATCHLP_FORMAT", value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dimensions to sweep.
    #[arg(long, env = "BATCHLP_DIM", value_delimiter = ',', default_values_t = batchlp::bench::DEFAULT_DIMS)]
    pub dim: Vec<usize>,
    /// Batch sizes to sweep; a size of 0 produces no row.
    #[arg(long, env = "BATCHLP_COUNT", value_delimiter = ',', default_values_t = batchlp::bench::DEFAULT_BATCH_SIZES)]
    pub count: Vec<usize>,
    #[arg(long, env = "BATCHLP_REPEATS", default_value_t = batchlp::bench::DEFAULT_REPEATS)]
    pub repeats: usize,
    #[arg(long, env = "BATCHLP_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "BATCHLP_FEASIBLE_START", default_value_t = true, action = ArgAction::Set)]
    pub feasible_start: bool,
    #[command(flatten)]
    pub pool: PoolArgs,
    /// Leave the timing columns empty so output is reproducible.
    #[arg(long, env = "BATCHLP_OMIT_TIMINGS")]
    pub omit_timings: bool,
    #[arg(long, env = "BATCHLP_FORMAT", value_enum, default_value = "csv")]
    pub format: Format,
}
