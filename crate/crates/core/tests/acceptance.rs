//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p anglepack --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use anglepack::bench::{run_bench, to_csv, to_markdown, BenchConfig, BenchRow, CSV_HEADER};
use anglepack::data::{table1, table1_optimum, table2, table2_optimum};
use anglepack::geometry::{cells, orientations, profiles, validate_layout, AnglePiece, StepProfile};
use anglepack::models::{CapacityBinding, Relaxation, Strategy};
use anglepack::oracle::{brute_force_optimal, DEFAULT_BUDGET};
use anglepack::{solve, Instance, Mode, ModelConfig, Status};
use common::{check_micro, random_instance, random_micro, rng, MicroKind};

const FIXED_INSTANCE_LIMIT: Duration = Duration::from_secs(60);
const ROTATION_INSTANCE_LIMIT: Duration = Duration::from_secs(120);
const INVARIANCE_INSTANCES: usize = 50;
const MICRO_PER_KIND: usize = 70;
const MICRO_MAX_SPACE: u64 = 50_000;
const BENCH_LIMIT: Duration = Duration::from_secs(20);

struct Verdict {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn reproduce(inst: &Instance, frozen: Option<i64>, limit: Duration, cap: i32) -> (bool, String) {
    let oracle = brute_force_optimal(inst, DEFAULT_BUDGET).expect("oracle within budget").objective();
    let mut ok = oracle.is_some() && oracle == frozen;
    let mut parts = vec![format!("oracle {oracle:?} frozen {frozen:?}")];
    for relaxation in Relaxation::ALL {
        let start = Instant::now();
        let out = solve(inst, &ModelConfig { relaxation, ..ModelConfig::default() });
        let took = start.elapsed();
        let valid = out.layout.as_ref().is_some_and(|l| validate_layout(inst, l).unwrap().is_valid());
        let fits = out.layout.as_ref().is_some_and(|l| l.end_x <= cap && l.end_y <= cap);
        let run_ok = out.status == Status::Optimal && out.objective == oracle && valid && fits && took <= limit;
        ok &= run_ok;
        parts.push(format!("{relaxation}: {} {:?} in {} ms", out.status, out.objective, took.as_millis()));
    }
    (ok, parts.join("; "))
}

fn criterion_1() -> Verdict {
    let (pass, detail) = reproduce(&table1(), table1_optimum().objective, FIXED_INSTANCE_LIMIT, 9);
    Verdict { id: 1, name: "ten-piece fixed-orientation instance, optimum under every relaxation", pass, detail }
}

fn criterion_2() -> Verdict {
    let (pass, detail) = reproduce(&table2(), table2_optimum().objective, ROTATION_INSTANCE_LIMIT, 10);
    Verdict { id: 2, name: "four-piece rotation instance, optimum under every relaxation", pass, detail }
}

fn criterion_3() -> Verdict {
    let mut r = rng(31);
    let mut mismatches = Vec::new();
    let mut runs = 0;
    for i in 0..INVARIANCE_INSTANCES {
        let mode = if i % 2 == 0 { Mode::Fixed } else { Mode::RotMirror };
        let inst = random_instance(&mut r, 4, 4, mode);
        let expected = brute_force_optimal(&inst, DEFAULT_BUDGET).unwrap().objective();
        for relaxation in Relaxation::ALL {
            for capacity_binding in [CapacityBinding::Tied, CapacityBinding::Free] {
                for strategy in [Strategy::Default, Strategy::Paper] {
                    let cfg = ModelConfig { relaxation, capacity_binding, strategy, ..ModelConfig::default() };
                    let out = solve(&inst, &cfg);
                    runs += 1;
                    let status_ok = match expected {
                        Some(_) => out.status == Status::Optimal,
                        None => out.status == Status::Infeasible,
                    };
                    if out.objective != expected || !status_ok {
                        mismatches.push(format!("instance {i} {relaxation}/{capacity_binding}/{strategy}"));
                    }
                }
            }
        }
    }
    Verdict {
        id: 3,
        name: "relaxation invariance against the oracle",
        pass: mismatches.is_empty(),
        detail: format!("{INVARIANCE_INSTANCES} instances, {runs} solves, {} mismatches {:?}", mismatches.len(), mismatches),
    }
}

fn criterion_4() -> Verdict {
    let mut r = rng(41);
    let (mut instances, mut lost, mut mismatched, mut space) = (0, 0, 0, 0u64);
    for kind in [MicroKind::Diffn, MicroKind::Cumulative, MicroKind::Trapezoid] {
        for _ in 0..MICRO_PER_KIND {
            let micro = random_micro(&mut r, kind, MICRO_MAX_SPACE);
            let report = check_micro(&micro, &mut r, 400);
            instances += 1;
            space += micro.space();
            lost += report.lost_values;
            mismatched += report.checker_mismatches;
        }
    }
    Verdict {
        id: 4,
        name: "propagator soundness on diffn/cumulative/trapezoid micro-instances",
        pass: instances >= 200 && lost == 0 && mismatched == 0,
        detail: format!("{instances} instances, {space} assignments, {lost} lost values, {mismatched} checker mismatches"),
    }
}

fn columns(p: &StepProfile) -> Vec<i32> {
    p.parts.iter().flat_map(|s| std::iter::repeat_n(s.height(), s.dur as usize)).collect()
}

fn geometry_failures(p: &AnglePiece) -> Vec<String> {
    let mut bad = Vec::new();
    let ops = orientations(p, Mode::RotMirror);
    let sets: Vec<BTreeSet<(i32, i32)>> = ops.iter().map(|o| cells(o, (0, 0))).collect();
    if sets.iter().collect::<BTreeSet<_>>().len() != sets.len() {
        bad.push(format!("{p}: duplicate orientations"));
    }
    for (op, set) in ops.iter().zip(&sets) {
        let (px, py) = profiles(op);
        if op.area() != p.area() || set.len() as i64 != p.area() {
            bad.push(format!("{p} orientation {}: area", op.orient));
        }
        if px.integral() != p.area() || py.integral() != p.area() {
            bad.push(format!("{p} orientation {}: profile integral", op.orient));
        }
        let turned: BTreeSet<(i32, i32)> = set.iter().map(|&(x, y)| (op.h - 1 - y, x)).collect();
        let mirrored: BTreeSet<(i32, i32)> = set.iter().map(|&(x, y)| (op.w - 1 - x, y)).collect();
        match sets.iter().position(|s| *s == turned) {
            Some(k) => {
                let (qx, qy) = profiles(&ops[k]);
                let mut rev = columns(&py);
                rev.reverse();
                if columns(&qx) != rev || columns(&qy) != columns(&px) {
                    bad.push(format!("{p} orientation {}: rotation duality", op.orient));
                }
            }
            None => bad.push(format!("{p} orientation {}: rotation missing", op.orient)),
        }
        if !sets.contains(&mirrored) {
            bad.push(format!("{p} orientation {}: mirror missing", op.orient));
        }
    }
    if orientations(p, Mode::Fixed).len() != 1 {
        bad.push(format!("{p}: fixed mode must have one orientation"));
    }
    bad
}

fn criterion_5() -> Verdict {
    let pieces: Vec<AnglePiece> = table1().pieces.into_iter().chain(table2().pieces).collect();
    let checked: usize = pieces.iter().map(|p| orientations(p, Mode::RotMirror).len()).sum();
    let failures: Vec<String> = pieces.iter().flat_map(geometry_failures).collect();
    Verdict {
        id: 5,
        name: "geometry invariants for every table piece and orientation",
        pass: failures.is_empty(),
        detail: format!("{} pieces, {checked} orientations, failures {failures:?}", pieces.len()),
    }
}

fn stable_key(r: &BenchRow) -> String {
    if r.status == "timeout" {
        format!("{},{},{},{},{},timeout", r.n, r.mode, r.relaxation, r.optimize, r.capacity_binding)
    } else {
        BenchRow { ms: 0, ..r.clone() }.csv()
    }
}

fn criterion_6() -> Verdict {
    let config = BenchConfig {
        sizes: (4..=7).collect(),
        mode: Mode::RotMirror,
        relaxations: vec![Relaxation::Cumulative, Relaxation::Trapeze],
        optimize: vec![false, true],
        time_limit: BENCH_LIMIT,
        jobs: 4,
        ..BenchConfig::default()
    };
    let first = run_bench(&config).expect("sizes within the family");
    let second = run_bench(&config).expect("sizes within the family");
    let csv = to_csv(&first);
    let md = to_markdown(&first, config.time_limit);
    let complete = first.len() == 16
        && csv.lines().next() == Some(CSV_HEADER)
        && csv.lines().skip(1).all(|l| l.split(',').count() == 10)
        && md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| n ")).count() == 4;
    let statuses_ok = first.iter().all(|r| ["optimal", "feasible", "timeout"].contains(&r.status.as_str()));
    let timeouts_ok = first.iter().filter(|r| r.status == "timeout").all(|r| r.ms >= BENCH_LIMIT.as_millis() as u64);
    let deterministic = first.iter().map(stable_key).eq(second.iter().map(stable_key));
    let note = md.lines().last().unwrap_or_default().to_string();
    Verdict {
        id: 6,
        name: "benchmark harness, sizes 4..7, rotation, both relaxations, with and without optimize",
        pass: complete && statuses_ok && timeouts_ok && deterministic,
        detail: format!(
            "{} rows, complete {complete}, statuses {statuses_ok}, timeouts at limit {timeouts_ok}, deterministic {deterministic}; {note}",
            first.len()
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let verdicts = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6()];
    for v in &verdicts {
        println!("[{}] criterion {}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.id, v.name, v.detail);
    }
    let failed: Vec<u8> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
