//! Shared generators and brute-force references for the integration tests.
#![allow(dead_code)]

use anglepack::constraints::{CumTask, Cumulative, Diffn, RectView, TrapPart, TrapTask, TrapezoidCumulative};
use anglepack::engine::{IntVar, Model, PropResult, PropagationStatus, Propagator, Store, Term};
use anglepack::{Instance, Mode};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance with up to `max_pieces` pieces whose sizes are at most `max_dim`.
pub fn random_instance(rng: &mut TestRng, max_pieces: usize, max_dim: i32, mode: Mode) -> Instance {
    let n = rng.gen_range(1..=max_pieces);
    let sizes: Vec<[i32; 4]> = (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(1..=max_dim))).collect();
    let cap_x = rng.gen_range(max_dim..=2 * max_dim);
    let cap_y = rng.gen_range(max_dim..=2 * max_dim);
    Instance::new(&sizes, cap_x, cap_y, mode).unwrap()
}

/// Removes a fixed set of values; lets tests start from domains with holes.
struct Holes {
    var: IntVar,
    values: Vec<i32>,
}

impl Propagator for Holes {
    fn name(&self) -> &'static str {
        "holes"
    }

    fn vars(&self) -> Vec<IntVar> {
        vec![self.var]
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        for &v in &self.values {
            store.remove(self.var, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Slot {
    Var(usize),
    Const(i32),
}

impl Slot {
    fn value(self, a: &[i32]) -> i32 {
        match self {
            Slot::Var(i) => a[i],
            Slot::Const(c) => c,
        }
    }

    fn term(self, vars: &[IntVar]) -> Term {
        match self {
            Slot::Var(i) => Term::Var(vars[i]),
            Slot::Const(c) => Term::Const(c),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Shape {
    Diffn { rects: Vec<[Slot; 4]>, extents: Option<(usize, usize)> },
    Cumulative { tasks: Vec<(usize, Slot, Slot)>, cap: usize, end: usize },
    Trapezoid { tasks: Vec<(usize, Vec<(Slot, Slot)>)>, cap: usize, end: usize },
}

/// A single constraint over a handful of small-domain variables.
#[derive(Debug, Clone)]
pub struct Micro {
    pub doms: Vec<Vec<i32>>,
    pub shape: Shape,
}

fn overlap(a0: i32, a1: i32, b0: i32, b1: i32) -> bool {
    a0.max(b0) < a1.min(b1)
}

/// Load at `t` must stay within `cap` for every `t`; `items` are (from, to, height).
fn load_ok(items: &[(i32, i32, i32)], cap: i32) -> bool {
    items.iter().filter(|i| i.0 < i.1).all(|&(from, _, _)| {
        let load: i32 = items.iter().filter(|j| j.0 <= from && from < j.1).map(|j| j.2).sum();
        load <= cap
    })
}

impl Micro {
    pub fn space(&self) -> u64 {
        self.doms.iter().map(|d| d.len() as u64).product()
    }

    /// Reference semantics, written directly from the constraint definitions.
    pub fn satisfied(&self, a: &[i32]) -> bool {
        match &self.shape {
            Shape::Diffn { rects, extents } => {
                let r: Vec<[i32; 4]> = rects.iter().map(|s| s.map(|x| x.value(a))).collect();
                if let Some((ex, ey)) = extents {
                    let inside = r.iter().all(|q| q[0] >= 0 && q[1] >= 0 && q[0] + q[2] <= a[*ex] && q[1] + q[3] <= a[*ey]);
                    if !inside {
                        return false;
                    }
                }
                for i in 0..r.len() {
                    for j in i + 1..r.len() {
                        let (p, q) = (r[i], r[j]);
                        let solid = p[2] > 0 && p[3] > 0 && q[2] > 0 && q[3] > 0;
                        if solid
                            && overlap(p[0], p[0] + p[2], q[0], q[0] + q[2])
                            && overlap(p[1], p[1] + p[3], q[1], q[1] + q[3])
                        {
                            return false;
                        }
                    }
                }
                true
            }
            Shape::Cumulative { tasks, cap, end } => {
                let items: Vec<(i32, i32, i32)> = tasks
                    .iter()
                    .map(|&(o, d, h)| (a[o], a[o] + d.value(a), h.value(a)))
                    .collect();
                items.iter().all(|i| i.1 <= a[*end]) && load_ok(&items, a[*cap])
            }
            Shape::Trapezoid { tasks, cap, end } => {
                let mut items = Vec::new();
                for (o, parts) in tasks {
                    let mut t = a[*o];
                    for &(d, h) in parts {
                        let d = d.value(a);
                        items.push((t, t + d, h.value(a)));
                        t += d;
                    }
                    if t > a[*end] {
                        return false;
                    }
                }
                load_ok(&items, a[*cap])
            }
        }
    }

    /// Engine model; `fixed` pins every variable to one value.
    pub fn model(&self, fixed: Option<&[i32]>) -> (Model, Vec<IntVar>) {
        let mut m = Model::new();
        let mut vars = Vec::new();
        for (i, d) in self.doms.iter().enumerate() {
            let (lo, hi) = match fixed {
                Some(a) => (a[i], a[i]),
                None => (d[0], *d.last().unwrap()),
            };
            let v = m.add_var(lo, hi).unwrap();
            if fixed.is_none() {
                let holes: Vec<i32> = (lo..=hi).filter(|x| !d.contains(x)).collect();
                if !holes.is_empty() {
                    m.post(Holes { var: v, values: holes }).unwrap();
                }
            }
            vars.push(v);
        }
        match &self.shape {
            Shape::Diffn { rects, extents } => {
                let views = rects
                    .iter()
                    .map(|s| RectView {
                        x: match s[0] {
                            Slot::Var(i) => vars[i],
                            Slot::Const(_) => unreachable!(),
                        },
                        y: match s[1] {
                            Slot::Var(i) => vars[i],
                            Slot::Const(_) => unreachable!(),
                        },
                        w: s[2].term(&vars),
                        h: s[3].term(&vars),
                    })
                    .collect();
                m.post(Diffn::new(views, extents.map(|(x, y)| (vars[x], vars[y])))).unwrap();
            }
            Shape::Cumulative { tasks, cap, end } => {
                let ts = tasks
                    .iter()
                    .map(|&(o, d, h)| CumTask { origin: vars[o], dur: d.term(&vars), height: h.term(&vars) })
                    .collect();
                m.post(Cumulative::new(ts, vars[*cap], vars[*end])).unwrap();
            }
            Shape::Trapezoid { tasks, cap, end } => {
                let ts = tasks
                    .iter()
                    .map(|(o, parts)| TrapTask {
                        origin: vars[*o],
                        parts: parts.iter().map(|&(d, h)| TrapPart { dur: d.term(&vars), height: h.term(&vars) }).collect(),
                    })
                    .collect();
                m.post(TrapezoidCumulative::new(ts, vars[*cap], vars[*end])).unwrap();
            }
        }
        (m, vars)
    }

    /// Every assignment, in lexicographic order.
    pub fn assignments(&self) -> impl Iterator<Item = Vec<i32>> + '_ {
        let total = self.space();
        (0..total).map(move |mut k| {
            self.doms
                .iter()
                .map(|d| {
                    let v = d[(k % d.len() as u64) as usize];
                    k /= d.len() as u64;
                    v
                })
                .collect()
        })
    }
}

struct Builder<'r> {
    rng: &'r mut TestRng,
    doms: Vec<Vec<i32>>,
}

impl Builder<'_> {
    fn var(&mut self, lo: i32, hi: i32) -> usize {
        let hi = self.rng.gen_range((hi - 1).max(lo)..=hi);
        let lo = self.rng.gen_range(lo..=(lo + 1).min(hi));
        let mut d: Vec<i32> = (lo..=hi).collect();
        if d.len() > 2 && self.rng.gen_bool(0.3) {
            let k = self.rng.gen_range(1..d.len() - 1);
            d.remove(k);
        }
        self.doms.push(d);
        self.doms.len() - 1
    }

    fn slot(&mut self, lo: i32, hi: i32, p_var: f64) -> Slot {
        if self.rng.gen_bool(p_var) {
            Slot::Var(self.var(lo, hi))
        } else {
            Slot::Const(self.rng.gen_range(lo.max(1)..=hi))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicroKind {
    Diffn,
    Cumulative,
    Trapezoid,
}

/// Random micro-instance whose assignment space is at most `max_space`.
pub fn random_micro(rng: &mut TestRng, kind: MicroKind, max_space: u64) -> Micro {
    loop {
        let mut b = Builder { rng: &mut *rng, doms: Vec::new() };
        let shape = match kind {
            MicroKind::Diffn => {
                let n = b.rng.gen_range(2..=3);
                let rects = (0..n)
                    .map(|_| {
                        let x = Slot::Var(b.var(0, 4));
                        let y = Slot::Var(b.var(0, 4));
                        let w = b.slot(0, 3, 0.3);
                        let h = b.slot(0, 3, 0.3);
                        [x, y, w, h]
                    })
                    .collect();
                let extents = if b.rng.gen_bool(0.5) { Some((b.var(1, 7), b.var(1, 7))) } else { None };
                Shape::Diffn { rects, extents }
            }
            MicroKind::Cumulative => {
                let n = b.rng.gen_range(2..=4);
                let tasks = (0..n)
                    .map(|_| {
                        let o = b.var(0, 4);
                        let d = b.slot(0, 3, 0.3);
                        let h = b.slot(0, 3, 0.3);
                        (o, d, h)
                    })
                    .collect();
                let cap = b.var(1, 5);
                let end = b.var(2, 8);
                Shape::Cumulative { tasks, cap, end }
            }
            MicroKind::Trapezoid => {
                let n = b.rng.gen_range(2..=3);
                let tasks = (0..n)
                    .map(|_| {
                        let o = b.var(0, 4);
                        let k = b.rng.gen_range(1..=3);
                        let parts = (0..k).map(|_| (b.slot(0, 2, 0.2), b.slot(0, 3, 0.2))).collect();
                        (o, parts)
                    })
                    .collect();
                let cap = b.var(1, 5);
                let end = b.var(2, 9);
                Shape::Trapezoid { tasks, cap, end }
            }
        };
        let micro = Micro { doms: b.doms, shape };
        if micro.space() <= max_space {
            return micro;
        }
    }
}

/// Outcome of checking one micro-instance against brute force.
#[derive(Debug, Default, Clone, Copy)]
pub struct SoundnessReport {
    pub solutions: usize,
    pub lost_values: usize,
    pub checker_mismatches: usize,
}

/// Root propagation must keep every value that appears in a solution, and
/// propagating a fully fixed assignment must agree with the reference.
pub fn check_micro(micro: &Micro, rng: &mut TestRng, max_fixed_checks: usize) -> SoundnessReport {
    let all: Vec<Vec<i32>> = micro.assignments().collect();
    let solutions: Vec<&Vec<i32>> = all.iter().filter(|a| micro.satisfied(a)).collect();
    let mut report = SoundnessReport { solutions: solutions.len(), ..Default::default() };

    let (mut m, vars) = micro.model(None);
    match m.propagate() {
        PropagationStatus::Failed => report.lost_values += solutions.len(),
        PropagationStatus::Stable => {
            for s in &solutions {
                report.lost_values += s.iter().zip(&vars).filter(|(v, x)| !m.domain(**x).contains(**v)).count();
            }
        }
    }

    let sample: Vec<&Vec<i32>> = if all.len() <= max_fixed_checks {
        all.iter().collect()
    } else {
        let mut s: Vec<&Vec<i32>> = all.choose_multiple(rng, max_fixed_checks).collect();
        s.extend(solutions.iter().take(max_fixed_checks / 4));
        s
    };
    for a in sample {
        let accepted = micro.model(Some(a)).0.propagate() == PropagationStatus::Stable;
        if accepted != micro.satisfied(a) {
            report.checker_mismatches += 1;
        }
    }
    report
}
