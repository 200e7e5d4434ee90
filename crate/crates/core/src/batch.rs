//! Memory-budgeted batching.
//!
//! Each LP needs `Y = (m+1)·cols·dataSize + 2·cols·dataSize` bytes, with
//! `cols = n + slack + artificial + 2`: the tableau plus two reduction
//! arrays of one row each. A budget of `S` bytes holds `⌊S / Y⌋` LPs at a
//! time, so a batch of `N` LPs is cut into `⌈N / batchSize⌉` contiguous
//! chunks that run back to back. Inside a chunk every LP is an independent
//! task on a pool of `W` workers.

use std::ops::Range;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use thiserror::Error;

use crate::model::StandardFormLP;
use crate::simplex::{solve, SolveOutcome, SolverError, SolverLimits, Status};

/// Default memory budget: 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq)]
pub struct BatchConfig {
    pub memory_budget_bytes: u64,
    pub workers: usize,
    pub limits: SolverLimits,
    pub data_size_bytes: u64,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            limits: SolverLimits::default(),
            data_size_bytes: std::mem::size_of::<f64>() as u64,
        }
    }
}

impl BatchConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_memory_budget(mut self, bytes: u64) -> Self {
        self.memory_budget_bytes = bytes;
        self
    }

    pub fn check(&self) -> Result<(), BatchError> {
        if self.memory_budget_bytes == 0 {
            return Err(BatchError::InvalidConfig("memory budget must be positive".into()));
        }
        if self.workers == 0 {
            return Err(BatchError::InvalidConfig("worker count must be at least 1".into()));
        }
        if self.data_size_bytes == 0 {
            return Err(BatchError::InvalidConfig("data size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BatchError {
    #[error("a single LP needs {lp_bytes} bytes, more than the {budget}-byte budget")]
    BatchTooLarge { lp_bytes: u64, budget: u64 },
    #[error("LP {index} has shape {found:?} (m, n), expected {expected:?}")]
    HeterogeneousBatch {
        index: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("invalid batch configuration: {0}")]
    InvalidConfig(String),
}

/// Bytes needed to hold one LP's tableau and its two reduction arrays.
pub fn lp_memory_bytes(
    m: usize,
    n: usize,
    num_slack: usize,
    num_artificial: usize,
    data_size: u64,
) -> u64 {
    let cols = (n + num_slack + num_artificial + 2) as u64;
    let tableau = (m as u64 + 1) * cols * data_size;
    let reduction = 2 * cols * data_size;
    tableau + reduction
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPlan {
    /// LPs that fit in the budget at once.
    pub batch_size: usize,
    /// Contiguous index ranges covering `0..N` in order.
    pub chunks: Vec<Range<usize>>,
}

impl ChunkPlan {
    pub fn sizes(&self) -> Vec<usize> {
        self.chunks.iter().map(|r| r.len()).collect()
    }
}

pub fn plan_chunks(count: usize, lp_bytes: u64, config: &BatchConfig) -> Result<ChunkPlan, BatchError> {
    config.check()?;
    let budget = config.memory_budget_bytes;
    if lp_bytes == 0 {
        return Err(BatchError::InvalidConfig("per-LP size must be positive".into()));
    }
    if lp_bytes > budget {
        return Err(BatchError::BatchTooLarge { lp_bytes, budget });
    }
    let batch_size = usize::try_from(budget / lp_bytes).unwrap_or(usize::MAX);
    let chunks = if count == 0 {
        Vec::new()
    } else if count <= batch_size {
        vec![0..count]
    } else {
        let total = count.div_ceil(batch_size);
        (0..total)
            .map(|i| {
                let start = i * batch_size;
                let end = if i == total - 1 { count } else { start + batch_size };
                start..end
            })
            .collect()
    };
    Ok(ChunkPlan { batch_size, chunks })
}

#[derive(Debug, Clone)]
pub struct BatchReport {
    /// One entry per input LP, in input order.
    pub outcomes: Vec<Result<SolveOutcome, SolverError>>,
    pub plan: ChunkPlan,
    /// Bytes per LP used for planning.
    pub lp_bytes: u64,
    pub chunk_times: Vec<Duration>,
    /// Validation, planning and worker start-up, before any LP is solved.
    pub setup_time: Duration,
    /// Solve time over all chunks; excludes `setup_time`.
    pub wall_time: Duration,
}

impl BatchReport {
    pub fn lps_per_second(&self) -> f64 {
        let secs = self.wall_time.as_secs_f64();
        if secs > 0.0 {
            self.outcomes.len() as f64 / secs
        } else {
            0.0
        }
    }

    /// Counts per status, in `Status` declaration order; failed solves are
    /// counted under `errors`.
    pub fn status_counts(&self) -> StatusCounts {
        let mut counts = StatusCounts::default();
        for outcome in &self.outcomes {
            match outcome {
                Ok(o) => match o.status {
                    Status::Optimal => counts.optimal += 1,
                    Status::Unbounded => counts.unbounded += 1,
                    Status::Infeasible => counts.infeasible += 1,
                    Status::IterationLimit => counts.iteration_limit += 1,
                },
                Err(_) => counts.errors += 1,
            }
        }
        counts
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct StatusCounts {
    pub optimal: usize,
    pub unbounded: usize,
    pub infeasible: usize,
    pub iteration_limit: usize,
    pub errors: usize,
}

impl std::fmt::Display for StatusCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "optimal={};unbounded={};infeasible={};iteration_limit={};errors={}",
            self.optimal, self.unbounded, self.infeasible, self.iteration_limit, self.errors
        )
    }
}

pub(crate) fn worker_pool(workers: usize) -> Result<ThreadPool, BatchError> {
    ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .thread_name(|i| format!("batchlp-worker-{i}"))
        .build()
        .map_err(|e| BatchError::InvalidConfig(e.to_string()))
}

/// Planned bytes per LP for a batch: the shared shape with the largest
/// artificial count found in the batch.
pub fn batch_lp_bytes(lps: &[StandardFormLP], data_size: u64) -> u64 {
    let Some(first) = lps.first() else {
        return lp_memory_bytes(0, 0, 0, 0, data_size);
    };
    let (m, n) = (first.num_constraints(), first.num_vars());
    let arti = lps.iter().map(|lp| lp.num_negative_rhs()).max().unwrap_or(0);
    lp_memory_bytes(m, n, m, arti, data_size)
}

/// Solves a batch of same-shape LPs chunk by chunk.
pub fn batch_solve(lps: &[StandardFormLP], config: &BatchConfig) -> Result<BatchReport, BatchError> {
    let setup_start = Instant::now();
    config.check()?;
    if let Some(first) = lps.first() {
        let expected = (first.num_constraints(), first.num_vars());
        for (index, lp) in lps.iter().enumerate() {
            let found = (lp.num_constraints(), lp.num_vars());
            if found != expected {
                return Err(BatchError::HeterogeneousBatch {
                    index,
                    expected,
                    found,
                });
            }
        }
    }
    let lp_bytes = batch_lp_bytes(lps, config.data_size_bytes);
    let plan = plan_chunks(lps.len(), lp_bytes, config)?;
    let pool = worker_pool(config.workers)?;
    let limits = config.limits;
    let setup_time = setup_start.elapsed();

    let start = Instant::now();
    let mut outcomes = Vec::with_capacity(lps.len());
    let mut chunk_times = Vec::with_capacity(plan.chunks.len());
    for range in &plan.chunks {
        let chunk_start = Instant::now();
        let solved: Vec<_> =
            pool.install(|| lps[range.clone()].par_iter().map(|lp| solve(lp, &limits)).collect());
        chunk_times.push(chunk_start.elapsed());
        log::debug!("chunk {:?} solved in {:?}", range, chunk_times.last().unwrap());
        outcomes.extend(solved);
    }
    Ok(BatchReport {
        outcomes,
        plan,
        lp_bytes,
        chunk_times,
        setup_time,
        wall_time: start.elapsed(),
    })
}
