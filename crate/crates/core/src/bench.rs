//! Benchmark harness over the shipped instance family.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;

use crate::data::{bench_family, bench_family_len};
use crate::geometry::{Instance, Mode};
use crate::models::{solve, CapacityBinding, ModelConfig, Relaxation, Strategy};

pub const CSV_HEADER: &str = "n,mode,relaxation,optimize,capacity_binding,status,objective,nodes,fails,ms";
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(7200);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("size {n} outside the instance family (1..={max})")]
    SizeOutOfRange { n: usize, max: usize },
    #[error("no sizes requested")]
    NoSizes,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub mode: Mode,
    pub relaxations: Vec<Relaxation>,
    pub optimize: Vec<bool>,
    pub capacity_binding: CapacityBinding,
    pub strategy: Strategy,
    pub time_limit: Duration,
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (4..=10).collect(),
            mode: Mode::RotMirror,
            relaxations: vec![Relaxation::Cumulative, Relaxation::Trapeze],
            optimize: vec![false, true],
            capacity_binding: CapacityBinding::Tied,
            strategy: Strategy::Default,
            time_limit: DEFAULT_TIME_LIMIT,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub mode: Mode,
    pub relaxation: Relaxation,
    pub optimize: bool,
    pub capacity_binding: CapacityBinding,
    pub status: String,
    pub objective: Option<i64>,
    pub nodes: u64,
    pub fails: u64,
    pub ms: u64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.mode,
            self.relaxation,
            self.optimize,
            self.capacity_binding,
            self.status,
            self.objective.map(|o| o.to_string()).unwrap_or_default(),
            self.nodes,
            self.fails,
            self.ms
        )
    }
}

/// The first `n` pieces of the family in the requested mode.
pub fn bench_instance(n: usize, mode: Mode) -> Result<Instance, BenchError> {
    let mut inst = bench_family(n).ok_or(BenchError::SizeOutOfRange { n, max: bench_family_len() })?;
    inst.mode = mode;
    Ok(inst)
}

fn run_one(n: usize, relaxation: Relaxation, optimize: bool, config: &BenchConfig) -> BenchRow {
    let inst = bench_instance(n, config.mode).expect("sizes checked before running");
    let model = ModelConfig {
        relaxation,
        optimize,
        capacity_binding: config.capacity_binding,
        time_limit: Some(config.time_limit),
        strategy: config.strategy,
    };
    let out = solve(&inst, &model);
    BenchRow {
        n,
        mode: config.mode,
        relaxation,
        optimize,
        capacity_binding: config.capacity_binding,
        status: out.status.to_string(),
        objective: out.objective,
        nodes: out.stats.nodes,
        fails: out.stats.fails,
        ms: out.stats.elapsed.as_millis() as u64,
    }
}

/// Runs every (size, relaxation, optimize) combination. Rows come back in
/// that lexicographic order whatever the number of jobs.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if config.sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    for &n in &config.sizes {
        bench_instance(n, config.mode)?;
    }
    let mut grid = Vec::new();
    for &n in &config.sizes {
        for &r in &config.relaxations {
            for &o in &config.optimize {
                grid.push((n, r, o));
            }
        }
    }

    let jobs = config.jobs.clamp(1, grid.len().max(1));
    if jobs == 1 {
        return Ok(grid.iter().map(|&(n, r, o)| run_one(n, r, o, config)).collect());
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; grid.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, r, o)) = grid.get(i) else { break };
                let row = run_one(n, r, o, config);
                slots.lock().expect("no panics while holding the lock")[i] = Some(row);
            });
        }
    });
    Ok(slots.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every slot filled")).collect())
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

fn column(r: &BenchRow) -> String {
    format!("{} / {}", r.relaxation, if r.optimize { "optimize" } else { "first" })
}

/// One line per size, one column per configuration, cells give run time in
/// milliseconds (`>limit` for a timeout) with the objective when known.
pub fn to_markdown(rows: &[BenchRow], time_limit: Duration) -> String {
    let mut columns: Vec<String> = Vec::new();
    for r in rows {
        let c = column(r);
        if !columns.contains(&c) {
            columns.push(c);
        }
    }
    let mut by_size: BTreeMap<usize, BTreeMap<String, &BenchRow>> = BTreeMap::new();
    for r in rows {
        by_size.entry(r.n).or_default().insert(column(r), r);
    }

    let mut out = String::new();
    let _ = writeln!(out, "| n | {} |", columns.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(columns.len()));
    for (n, cells) in &by_size {
        let line: Vec<String> = columns
            .iter()
            .map(|c| match cells.get(c) {
                Some(r) if r.status == "timeout" => format!(">{} ms", time_limit.as_millis()),
                Some(r) => match r.objective {
                    Some(o) => format!("{} ms ({}, {})", r.ms, r.status, o),
                    None => format!("{} ms ({})", r.ms, r.status),
                },
                None => String::new(),
            })
            .collect();
        let _ = writeln!(out, "| {} | {} |", n, line.join(" | "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", observation(rows));
    out
}

/// Summed run time per relaxation, reported without any claim attached.
pub fn observation(rows: &[BenchRow]) -> String {
    let mut totals: BTreeMap<String, (u64, usize, usize)> = BTreeMap::new();
    for r in rows {
        let t = totals.entry(r.relaxation.to_string()).or_default();
        t.0 += r.ms;
        t.1 += 1;
        t.2 += usize::from(r.status == "timeout");
    }
    let parts: Vec<String> = totals
        .iter()
        .map(|(k, (ms, runs, timeouts))| format!("{k}: {ms} ms over {runs} runs, {timeouts} timeouts"))
        .collect();
    format!(
        "Observation (not asserted; timings depend on the machine): {}.",
        parts.join("; ")
    )
}
