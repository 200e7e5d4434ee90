//! Throughput sweeps over generated workloads.
//!
//! A sweep generates one batch per `(dim, batch_size)` cell, solves it
//! `repeats` times and reports mean timings. Generation happens before the
//! clock starts, and the setup phase of each solve (validation, planning,
//! worker start-up) is reported apart from solve time.

use std::io::Write;

use serde::Serialize;

use crate::batch::{batch_solve, BatchConfig, BatchError, StatusCounts};
use crate::generate::gen_random_lps;
use crate::simplex::{SolveOutcome, SolverError};

/// Dimensions swept by default (`m = n = dim`).
pub const DEFAULT_DIMS: [usize; 4] = [5, 28, 50, 100];
/// Batch sizes swept by default.
pub const DEFAULT_BATCH_SIZES: [usize; 4] = [100, 1_000, 10_000, 100_000];
/// Repeats averaged per cell by default.
pub const DEFAULT_REPEATS: usize = 10;

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub dims: Vec<usize>,
    pub batch_sizes: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub feasible_start: bool,
    pub config: BatchConfig,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            dims: DEFAULT_DIMS.to_vec(),
            batch_sizes: DEFAULT_BATCH_SIZES.to_vec(),
            repeats: DEFAULT_REPEATS,
            seed: 0,
            feasible_start: true,
            config: BatchConfig::default(),
        }
    }
}

/// One CSV row of a sweep. Timing fields are `None` when timings are
/// suppressed for reproducible output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dim: usize,
    pub batch_size: usize,
    pub setup_ms: Option<f64>,
    pub wall_ms: Option<f64>,
    pub lps_per_sec: Option<f64>,
    pub status_counts: String,
}

impl BenchRow {
    pub fn without_timings(mut self) -> Self {
        self.setup_ms = None;
        self.wall_ms = None;
        self.lps_per_sec = None;
        self
    }
}

/// A finished cell: its row plus the outcomes of the first repeat.
#[derive(Debug, Clone)]
pub struct BenchCell {
    pub row: BenchRow,
    pub outcomes: Vec<Result<SolveOutcome, SolverError>>,
}

/// Column names, in output order.
pub const CSV_HEADER: [&str; 6] = ["dim", "batch_size", "setup_ms", "wall_ms", "lps_per_sec", "status_counts"];

/// Runs every `(dim, batch_size)` cell of the sweep. Cells with a zero
/// batch size produce no row.
pub fn run_bench(sweep: &BenchSpec) -> Result<Vec<BenchCell>, BatchError> {
    if sweep.repeats == 0 {
        return Err(BatchError::InvalidConfig("repeats must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for &dim in &sweep.dims {
        for &count in sweep.batch_sizes.iter().filter(|&&c| c > 0) {
            cells.push(bench_cell(sweep, dim, count)?);
        }
    }
    Ok(cells)
}

fn bench_cell(sweep: &BenchSpec, dim: usize, count: usize) -> Result<BenchCell, BatchError> {
    let lps = gen_random_lps(dim, count, sweep.seed, sweep.feasible_start);
    let (mut setup, mut wall) = (0.0, 0.0);
    let mut first: Option<(StatusCounts, Vec<_>)> = None;
    for _ in 0..sweep.repeats {
        let report = batch_solve(&lps, &sweep.config)?;
        setup += report.setup_time.as_secs_f64() * 1e3;
        wall += report.wall_time.as_secs_f64() * 1e3;
        if first.is_none() {
            first = Some((report.status_counts(), report.outcomes));
        }
    }
    let r = sweep.repeats as f64;
    let (setup_ms, wall_ms) = (setup / r, wall / r);
    let lps_per_sec = if wall_ms > 0.0 { count as f64 / (wall_ms / 1e3) } else { 0.0 };
    let (counts, outcomes) = first.expect("at least one repeat");
    log::info!("dim={dim} batch_size={count}: {wall_ms:.3} ms");
    Ok(BenchCell {
        row: BenchRow {
            dim,
            batch_size: count,
            setup_ms: Some(setup_ms),
            wall_ms: Some(wall_ms),
            lps_per_sec: Some(lps_per_sec),
            status_counts: counts.to_string(),
        },
        outcomes,
    })
}

/// Writes `rows` as CSV with a header line, even when `rows` is empty.
pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
