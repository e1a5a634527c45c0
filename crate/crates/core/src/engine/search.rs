use std::time::{Duration, Instant};

use super::{Domain, IntVar, Model};

/// How often (in nodes) the wall clock is polled.
const CLOCK_POLL: u64 = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub time_limit: Option<Duration>,
}

impl SearchLimits {
    pub fn none() -> Self {
        SearchLimits { time_limit: None }
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        SearchLimits { time_limit: Some(limit) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub fails: u64,
    pub solutions: u64,
    pub best_objective: Option<i64>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// The tree was exhausted (or the first solution was found when satisfying).
    Complete,
    Timeout,
}

/// A full assignment, indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    values: Vec<i32>,
}

impl Solution {
    pub fn value(&self, v: IntVar) -> i32 {
        self.values[v.index()]
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub solution: Option<Solution>,
    pub objective: Option<i64>,
}

struct Run<'a> {
    order: &'a [IntVar],
    objective: Option<Vec<IntVar>>,
    deadline: Option<Instant>,
    best: Option<(Solution, Option<i64>)>,
    timed_out: bool,
    stop: bool,
}

impl Model {
    /// Depth-first search for the first solution. Variables of `order` are
    /// branched on first, in that order; any variable still unfixed after
    /// them is labeled afterwards in creation order. Values ascend.
    pub fn label(&mut self, order: &[IntVar], limits: &SearchLimits) -> SearchOutcome {
        self.run(order, None, limits)
    }

    /// Branch-and-bound on `Σ objective`: each incumbent of value `v`
    /// tightens the bound to `v - 1` and search continues from where it is.
    pub fn minimize(&mut self, order: &[IntVar], objective: &[IntVar], limits: &SearchLimits) -> SearchOutcome {
        if self.objective.is_none() {
            self.set_objective(objective.to_vec()).expect("objective variables belong to the model");
        }
        self.run(order, Some(objective.to_vec()), limits)
    }

    fn run(&mut self, order: &[IntVar], objective: Option<Vec<IntVar>>, limits: &SearchLimits) -> SearchOutcome {
        let start = Instant::now();
        self.stats = SearchStats::default();
        let root = self.store.doms.clone();
        self.store.objective_ub = None;
        let mut run = Run {
            order,
            objective,
            deadline: limits.time_limit.map(|l| start + l),
            best: None,
            timed_out: false,
            stop: false,
        };
        let all: Vec<usize> = (0..self.props.len()).collect();
        if self.fixpoint(&all).is_ok() {
            self.dfs(&mut run, 0);
        }
        self.store.doms = root;
        self.store.objective_ub = None;
        self.stats.elapsed = start.elapsed();

        let status = if run.timed_out { SearchStatus::Timeout } else { SearchStatus::Complete };
        let (solution, objective) = match run.best {
            Some((s, o)) => (Some(s), o),
            None => (None, None),
        };
        SearchOutcome { status, solution, objective }
    }

    fn next_var(&self, order: &[IntVar], pos: usize) -> Option<(IntVar, usize)> {
        if let Some(i) = order[pos..].iter().position(|v| !self.store.is_fixed(*v)) {
            return Some((order[pos + i], pos + i + 1));
        }
        self.store
            .doms
            .iter()
            .position(|d| !d.is_fixed())
            .map(|i| (IntVar(i as u32), order.len()))
    }

    fn dfs(&mut self, run: &mut Run<'_>, pos: usize) {
        let Some((var, next_pos)) = self.next_var(run.order, pos) else {
            self.leaf(run);
            return;
        };
        let values: Vec<i32> = self.store.dom(var).iter().collect();
        for v in values {
            if run.stop {
                return;
            }
            self.stats.nodes += 1;
            if let Some(deadline) = run.deadline {
                if self.stats.nodes.is_multiple_of(CLOCK_POLL) && Instant::now() >= deadline {
                    run.timed_out = true;
                    run.stop = true;
                    return;
                }
            }
            let saved: Vec<Domain> = self.store.doms.clone();
            let ok = self.store.assign(var, v).is_ok() && self.propagate_from(&[var]).is_ok();
            if ok {
                self.dfs(run, next_pos);
            } else {
                self.stats.fails += 1;
            }
            self.store.doms = saved;
        }
    }

    fn leaf(&mut self, run: &mut Run<'_>) {
        let all: Vec<usize> = (0..self.props.len()).collect();
        if self.fixpoint(&all).is_err() {
            self.stats.fails += 1;
            return;
        }
        let values: Vec<i32> = self.store.doms.iter().map(|d| d.min()).collect();
        let solution = Solution { values };
        self.stats.solutions += 1;
        match &run.objective {
            Some(obj) => {
                let value: i64 = obj.iter().map(|&v| i64::from(solution.value(v))).sum();
                self.stats.best_objective = Some(value);
                self.store.objective_ub = Some(value - 1);
                run.best = Some((solution, Some(value)));
            }
            None => {
                run.best = Some((solution, None));
                run.stop = true;
            }
        }
    }
}
