use std::path::{Path, PathBuf};

use batchlp::bench::{run_bench, write_csv, BenchRow, BenchSpec};
use batchlp::oracle::{vertex_enumerate, vertex_enumerate_general, OracleError};
use batchlp::{
    batch_solve, check_certificate, gen_random_lps, parse_mps, solve, standardize, BatchReport, Certificate,
    GeneralLP, Sense, SolveOutcome, SolverError, StandardFormLP, Status, VariableMap,
};
use serde::Serialize;
use thiserror::Error;

use crate::args::{BatchArgs, BenchArgs, Format, GenArgs, SolveArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

/// What a command printed, and why it failed verification if it did.
pub struct Output {
    pub stdout: String,
    pub verification_failure: Option<String>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            verification_failure: None,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Turns `-0.0` into `0.0` so printed values do not depend on sign of zero.
fn tidy(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn csv<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(input_err)?;
    for row in rows {
        w.serialize(row).map_err(input_err)?;
    }
    String::from_utf8(w.into_inner().map_err(input_err)?).map_err(input_err)
}

/// An MPS file taken all the way to standard form.
struct Loaded {
    source: String,
    name: String,
    general: GeneralLP,
    lp: StandardFormLP,
    map: VariableMap,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let with_path = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", path.display()));
    let model = parse_mps(&text).map_err(|e| with_path(&e))?;
    let general = batchlp::lower_to_general(&model).map_err(|e| with_path(&e))?;
    let (lp, map) = standardize(&general).map_err(|e| with_path(&e))?;
    Ok(Loaded {
        source: path.display().to_string(),
        name: model.name,
        general,
        lp,
        map,
    })
}

fn sense_str(sense: Sense) -> &'static str {
    match sense {
        Sense::Minimize => "min",
        Sense::Maximize => "max",
    }
}

#[derive(Serialize)]
struct SolveReport {
    source: String,
    name: String,
    sense: &'static str,
    status: Status,
    value: Option<f64>,
    point: Option<Vec<f64>>,
    variables: Vec<String>,
    iterations_phase1: usize,
    iterations_phase2: usize,
    certified: Option<bool>,
    certificate: Option<Certificate>,
}

#[derive(Serialize)]
struct SolveRow<'a> {
    source: &'a str,
    name: &'a str,
    sense: &'a str,
    status: Status,
    value: Option<f64>,
    iterations_phase1: usize,
    iterations_phase2: usize,
    certified: Option<bool>,
}

const SOLVE_HEADER: [&str; 8] = [
    "source",
    "name",
    "sense",
    "status",
    "value",
    "iterations_phase1",
    "iterations_phase2",
    "certified",
];

pub fn solve_cmd(args: &SolveArgs) -> Result<Output, CliError> {
    let loaded = load(&args.input)?;
    let out = solve(&loaded.lp, &args.limits.limits()).map_err(input_err)?;
    let certificate = check_certificate(&loaded.lp, &out).ok();
    let certified = certificate.as_ref().map(Certificate::is_certified);
    let report = SolveReport {
        source: loaded.source,
        name: loaded.name,
        sense: sense_str(loaded.general.sense),
        status: out.status,
        value: out.objective_value.map(|v| tidy(loaded.map.recover_objective(v))),
        point: out
            .primal_point
            .as_ref()
            .map(|p| loaded.map.recover_point(p).into_iter().map(tidy).collect()),
        variables: loaded.general.var_names.clone(),
        iterations_phase1: out.iterations_phase1,
        iterations_phase2: out.iterations_phase2,
        certified,
        certificate,
    };
    let stdout = match args.format {
        Format::Json => json(&report),
        Format::Csv => csv(
            &SOLVE_HEADER,
            &[SolveRow {
                source: &report.source,
                name: &report.name,
                sense: report.sense,
                status: report.status,
                value: report.value,
                iterations_phase1: report.iterations_phase1,
                iterations_phase2: report.iterations_phase2,
                certified: report.certified,
            }],
        )?,
        Format::Text => {
            let mut s = format!("{} ({}, {}): {}\n", report.name, report.source, report.sense, report.status);
            if let (Some(v), Some(x)) = (report.value, &report.point) {
                s += &format!("value {v}\n");
                for (name, xj) in report.variables.iter().zip(x) {
                    s += &format!("  {name} = {xj}\n");
                }
            }
            s += &format!(
                "iterations {} + {}\n",
                report.iterations_phase1, report.iterations_phase2
            );
            if let Some(c) = report.certified {
                s += &format!("certified {c}\n");
            }
            s
        }
    };
    let verification_failure = (certified == Some(false)).then(|| format!("{}: optimal outcome not certified", report.source));
    Ok(Output {
        stdout,
        verification_failure,
    })
}

/// The LPs of a batch or verify run, with what is needed to report them in
/// their original form.
struct Workload {
    sources: Vec<String>,
    lps: Vec<StandardFormLP>,
    loaded: Vec<Loaded>,
}

fn workload(args: &BatchArgs) -> Result<Workload, CliError> {
    if args.input.is_empty() {
        let w = &args.workload;
        let lps = gen_random_lps(w.dim, w.count, w.seed, w.feasible_start);
        return Ok(Workload {
            sources: (0..lps.len()).map(|i| format!("gen:{}:{}:{i}", w.dim, w.seed)).collect(),
            lps,
            loaded: Vec::new(),
        });
    }
    let loaded = args.input.iter().map(|p: &PathBuf| load(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Workload {
        sources: loaded.iter().map(|l| l.source.clone()).collect(),
        lps: loaded.iter().map(|l| l.lp.clone()).collect(),
        loaded,
    })
}

impl Workload {
    /// Objective in the caller's original sense.
    fn value(&self, index: usize, out: &SolveOutcome) -> Option<f64> {
        let v = out.objective_value?;
        Some(tidy(match self.loaded.get(index) {
            Some(l) => l.map.recover_objective(v),
            None => v,
        }))
    }
}

#[derive(Serialize)]
struct OutcomeRecord {
    index: usize,
    source: String,
    status: Option<Status>,
    value: Option<f64>,
    iterations_phase1: Option<usize>,
    iterations_phase2: Option<usize>,
    error: Option<String>,
}

const OUTCOME_HEADER: [&str; 7] = [
    "index",
    "source",
    "status",
    "value",
    "iterations_phase1",
    "iterations_phase2",
    "error",
];

#[derive(Serialize)]
struct BatchSummary {
    count: usize,
    lp_bytes: u64,
    batch_size: usize,
    chunks: Vec<usize>,
    status_counts: batchlp::StatusCounts,
    outcomes: Vec<OutcomeRecord>,
}

fn outcome_records(work: &Workload, outcomes: &[Result<SolveOutcome, SolverError>]) -> Vec<OutcomeRecord> {
    outcomes
        .iter()
        .enumerate()
        .map(|(index, o)| {
            let source = work.sources[index].clone();
            match o {
                Ok(out) => OutcomeRecord {
                    index,
                    source,
                    status: Some(out.status),
                    value: work.value(index, out),
                    iterations_phase1: Some(out.iterations_phase1),
                    iterations_phase2: Some(out.iterations_phase2),
                    error: None,
                },
                Err(e) => OutcomeRecord {
                    index,
                    source,
                    status: None,
                    value: None,
                    iterations_phase1: None,
                    iterations_phase2: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

pub fn batch_cmd(args: &BatchArgs) -> Result<Output, CliError> {
    let work = workload(args)?;
    let report: BatchReport = batch_solve(&work.lps, &args.pool.config()).map_err(input_err)?;
    log::info!(
        "{} LPs: setup {:?}, solve {:?}",
        work.lps.len(),
        report.setup_time,
        report.wall_time
    );
    let records = outcome_records(&work, &report.outcomes);
    let stdout = match args.format {
        Format::Json => json(&BatchSummary {
            count: records.len(),
            lp_bytes: report.lp_bytes,
            batch_size: report.plan.batch_size,
            chunks: report.plan.sizes(),
            status_counts: report.status_counts(),
            outcomes: records,
        }),
        Format::Csv => csv(&OUTCOME_HEADER, &records)?,
        Format::Text => {
            let mut s = format!(
                "{} LPs in {} chunks of at most {} ({} bytes each)\n{}\n",
                records.len(),
                report.plan.chunks.len(),
                report.plan.batch_size,
                report.lp_bytes,
                report.status_counts()
            );
            for r in &records {
                let status = r.status.map_or("error", Status::as_str);
                match r.value {
                    Some(v) => s += &format!("{:>6} {} {status} {v}\n", r.index, r.source),
                    None => s += &format!("{:>6} {} {status}\n", r.index, r.source),
                }
            }
            s
        }
    };
    Ok(Output::ok(stdout))
}

pub fn gen_cmd(args: &GenArgs) -> Result<Output, CliError> {
    let w = &args.workload;
    let lps = gen_random_lps(w.dim, w.count, w.seed, w.feasible_start);
    let stdout = match args.format {
        Format::Json => json(&lps),
        Format::Text => lps
            .iter()
            .map(|lp| serde_json::to_string(lp).expect("LPs serialize") + "\n")
            .collect(),
        Format::Csv => return Err(CliError::Input("gen does not support csv output; use json or text".into())),
    };
    Ok(Output::ok(stdout))
}

pub fn bench_cmd(args: &BenchArgs) -> Result<Output, CliError> {
    let sweep = BenchSpec {
        dims: args.dim.clone(),
        batch_sizes: args.count.clone(),
        repeats: args.repeats,
        seed: args.seed,
        feasible_start: args.feasible_start,
        config: args.pool.config(),
    };
    let rows: Vec<BenchRow> = run_bench(&sweep)
        .map_err(input_err)?
        .into_iter()
        .map(|cell| if args.omit_timings { cell.row.without_timings() } else { cell.row })
        .collect();
    let stdout = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows).map_err(input_err)?;
            String::from_utf8(buf).map_err(input_err)?
        }
        Format::Json => json(&rows),
        Format::Text => {
            let ms = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
            rows.iter()
                .map(|r| {
                    format!(
                        "dim {:>4}  batch {:>7}  setup {} ms  wall {} ms  {} LP/s  {}\n",
                        r.dim,
                        r.batch_size,
                        ms(r.setup_ms),
                        ms(r.wall_ms),
                        r.lps_per_sec.map_or("-".to_string(), |v| format!("{v:.0}")),
                        r.status_counts
                    )
                })
                .collect()
        }
    };
    Ok(Output::ok(stdout))
}

#[derive(Serialize)]
struct VerifyRecord {
    index: usize,
    source: String,
    status: Option<Status>,
    oracle_status: Option<Status>,
    value: Option<f64>,
    oracle_value: Option<f64>,
    certified: Option<bool>,
    ok: bool,
}

const VERIFY_HEADER: [&str; 8] = [
    "index",
    "source",
    "status",
    "oracle_status",
    "value",
    "oracle_value",
    "certified",
    "ok",
];

#[derive(Serialize)]
struct VerifySummary {
    checked: usize,
    oracle_checked: usize,
    certified: usize,
    failures: usize,
    records: Vec<VerifyRecord>,
}

fn oracle_for(work: &Workload, index: usize) -> Result<Option<SolveOutcome>, CliError> {
    let result = match work.loaded.get(index) {
        Some(l) => vertex_enumerate_general(&l.general),
        None => vertex_enumerate(&work.lps[index]),
    };
    match result {
        Ok(o) => Ok(Some(o)),
        Err(OracleError::OracleBudget(_)) => Ok(None),
        Err(e) => Err(input_err(e)),
    }
}

pub fn verify_cmd(args: &BatchArgs) -> Result<Output, CliError> {
    let work = workload(args)?;
    let report = batch_solve(&work.lps, &args.pool.config()).map_err(input_err)?;
    let mut records = Vec::with_capacity(work.lps.len());
    for (index, outcome) in report.outcomes.iter().enumerate() {
        let oracle = oracle_for(&work, index)?;
        let oracle_value = oracle.as_ref().and_then(|o| o.objective_value).map(tidy);
        let mut record = VerifyRecord {
            index,
            source: work.sources[index].clone(),
            status: None,
            oracle_status: oracle.as_ref().map(|o| o.status),
            value: None,
            oracle_value,
            certified: None,
            ok: false,
        };
        if let Ok(out) = outcome {
            record.status = Some(out.status);
            record.value = work.value(index, out);
            record.certified = check_certificate(&work.lps[index], out).ok().map(|c| c.is_certified());
            let status_ok = record.oracle_status.is_none_or(|s| s == out.status);
            let value_ok = match (record.value, record.oracle_value) {
                (Some(v), Some(w)) => (v - w).abs() <= 1e-6 * 1f64.max(v.abs()).max(w.abs()),
                _ => true,
            };
            record.ok = status_ok && value_ok && record.certified != Some(false);
        }
        records.push(record);
    }
    let failures = records.iter().filter(|r| !r.ok).count();
    let summary = VerifySummary {
        checked: records.len(),
        oracle_checked: records.iter().filter(|r| r.oracle_status.is_some()).count(),
        certified: records.iter().filter(|r| r.certified == Some(true)).count(),
        failures,
        records,
    };
    let stdout = match args.format {
        Format::Json => json(&summary),
        Format::Csv => csv(&VERIFY_HEADER, &summary.records)?,
        Format::Text => {
            let mut s = format!(
                "checked {}, oracle {}, certified {}, failures {}\n",
                summary.checked, summary.oracle_checked, summary.certified, summary.failures
            );
            for r in summary.records.iter().filter(|r| !r.ok) {
                s += &format!(
                    "FAIL {} {}: {:?} vs oracle {:?}, certified {:?}\n",
                    r.index, r.source, r.status, r.oracle_status, r.certified
                );
            }
            s
        }
    };
    Ok(Output {
        stdout,
        verification_failure: (failures > 0).then(|| format!("{failures} outcomes failed verification")),
    })
}
