//! Rectangular and step-profile cumulative constraints.
//!
//! Both share one filtering routine: a task is an origin plus consecutive
//! parts, a rectangular task being a task with a single part. Filtering is
//! time-tabling over compulsory parts plus a global energy bound.

use super::diffn::div_ceil;
use crate::engine::{Empty, IntVar, PropResult, Propagator, Store, Term};
use crate::geometry::StepProfile;

/// Rectangular task: occupies `height` on `[origin, origin + dur)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CumTask {
    pub origin: IntVar,
    pub dur: Term,
    pub height: Term,
}

/// One constant step of a step-profile task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrapPart {
    pub dur: Term,
    pub height: Term,
}

/// Step-profile task: parts are laid end to end from `origin`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapTask {
    pub origin: IntVar,
    pub parts: Vec<TrapPart>,
}

impl TrapTask {
    /// Constant task from a geometric profile; sloped parts count at their
    /// higher end.
    pub fn from_profile(origin: IntVar, profile: &StepProfile) -> Self {
        let parts = profile
            .parts
            .iter()
            .map(|p| TrapPart { dur: Term::Const(p.dur), height: Term::Const(p.height()) })
            .collect();
        TrapTask { origin, parts }
    }
}

/// `Σ height ≤ cap` at every point and every task ends by `end`.
#[derive(Debug, Clone)]
pub struct Cumulative {
    tasks: Vec<TrapTask>,
    cap: IntVar,
    end: IntVar,
}

impl Cumulative {
    pub fn new(tasks: Vec<CumTask>, cap: IntVar, end: IntVar) -> Self {
        let tasks = tasks
            .into_iter()
            .map(|t| TrapTask { origin: t.origin, parts: vec![TrapPart { dur: t.dur, height: t.height }] })
            .collect();
        Cumulative { tasks, cap, end }
    }
}

impl Propagator for Cumulative {
    fn name(&self) -> &'static str {
        "cumulative"
    }

    fn vars(&self) -> Vec<IntVar> {
        task_vars(&self.tasks, self.cap, self.end)
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        filter(&self.tasks, self.cap, self.end, store)
    }
}

/// Cumulative over step-profile tasks.
#[derive(Debug, Clone)]
pub struct TrapezoidCumulative {
    tasks: Vec<TrapTask>,
    cap: IntVar,
    end: IntVar,
}

impl TrapezoidCumulative {
    pub fn new(tasks: Vec<TrapTask>, cap: IntVar, end: IntVar) -> Self {
        TrapezoidCumulative { tasks, cap, end }
    }
}

impl Propagator for TrapezoidCumulative {
    fn name(&self) -> &'static str {
        "trapezoid_cumulative"
    }

    fn vars(&self) -> Vec<IntVar> {
        task_vars(&self.tasks, self.cap, self.end)
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        filter(&self.tasks, self.cap, self.end, store)
    }
}

fn task_vars(tasks: &[TrapTask], cap: IntVar, end: IntVar) -> Vec<IntVar> {
    let mut vs = vec![cap, end];
    for t in tasks {
        vs.push(t.origin);
        vs.extend(t.parts.iter().flat_map(|p| [p.dur.var(), p.height.var()]).flatten());
    }
    vs
}

/// Surely-occupied interval of one part.
#[derive(Debug, Clone, Copy)]
struct Mandatory {
    task: usize,
    from: i32,
    to: i32,
    height: i32,
}

/// Maximal interval of constant compulsory height.
#[derive(Debug, Clone, Copy)]
struct Segment {
    from: i32,
    to: i32,
    height: i64,
}

fn profile(parts: &[Mandatory]) -> Vec<Segment> {
    let mut events: Vec<(i32, i64)> = Vec::with_capacity(parts.len() * 2);
    for m in parts {
        events.push((m.from, i64::from(m.height)));
        events.push((m.to, -i64::from(m.height)));
    }
    events.sort_unstable();
    let mut out = Vec::new();
    let mut level = 0i64;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        while i < events.len() && events[i].0 == t {
            level += events[i].1;
            i += 1;
        }
        if level > 0 && i < events.len() {
            out.push(Segment { from: t, to: events[i].0, height: level });
        }
    }
    out
}

fn filter(tasks: &[TrapTask], cap: IntVar, end: IntVar, store: &mut Store) -> PropResult {
    // each task ends by `end`; part durations bounded by the room left
    for t in tasks {
        let total_min: i32 = t.parts.iter().map(|p| store.tmin(p.dur)).sum();
        store.set_min(end, store.min(t.origin) + total_min)?;
        store.set_max(t.origin, store.max(end) - total_min)?;
        for p in &t.parts {
            let others = total_min - store.tmin(p.dur);
            store.tset_max(p.dur, store.max(end) - store.min(t.origin) - others)?;
            if store.tmin(p.dur) > 0 {
                store.tset_max(p.height, store.max(cap))?;
                store.set_min(cap, store.tmin(p.height))?;
            }
        }
    }

    let mut mandatory = Vec::new();
    for (k, t) in tasks.iter().enumerate() {
        let (mut pre_min, mut pre_max) = (0, 0);
        for p in &t.parts {
            let (d, h) = (store.tmin(p.dur), store.tmin(p.height));
            let from = store.max(t.origin) + pre_max;
            let to = store.min(t.origin) + pre_min + d;
            if h > 0 && from < to {
                mandatory.push(Mandatory { task: k, from, to, height: h });
            }
            pre_min += d;
            pre_max += store.tmax(p.dur);
        }
    }
    let segments = profile(&mandatory);
    let peak = segments.iter().map(|s| s.height).max().unwrap_or(0);
    if peak > i64::from(store.max(cap)) {
        return Err(Empty);
    }
    store.set_min(cap, peak as i32)?;

    for (k, t) in tasks.iter().enumerate() {
        let own: Vec<&Mandatory> = mandatory.iter().filter(|m| m.task == k).collect();
        let (mut pre_min, mut pre_max) = (0, 0);
        for p in &t.parts {
            let (d, h) = (store.tmin(p.dur), store.tmin(p.height));
            if d > 0 && h > 0 && pre_min == pre_max {
                let cap_max = i64::from(store.max(cap));
                for s in &segments {
                    let mine: i64 = own.iter().filter(|m| m.from <= s.from && s.to <= m.to).map(|m| i64::from(m.height)).sum();
                    if s.height - mine + i64::from(h) > cap_max {
                        store.remove_range(t.origin, s.from - d + 1 - pre_min, s.to - 1 - pre_min)?;
                    }
                }
            }
            pre_min += d;
            pre_max += store.tmax(p.dur);
        }
    }

    let mut energy = 0i64;
    let mut est = i32::MAX;
    for t in tasks {
        let e: i64 = t.parts.iter().map(|p| i64::from(store.tmin(p.dur)) * i64::from(store.tmin(p.height))).sum();
        if e > 0 {
            energy += e;
            est = est.min(store.min(t.origin));
        }
    }
    if energy > 0 {
        let cap_max = i64::from(store.max(cap));
        let span = i64::from(store.max(end)) - i64::from(est);
        if cap_max <= 0 || span <= 0 || cap_max * span < energy {
            return Err(Empty);
        }
        store.set_min(end, est + div_ceil(energy, cap_max))?;
        store.set_min(cap, div_ceil(energy, span))?;
    }
    Ok(())
}
