//! A small finite-domain constraint core: integer variables, a propagation
//! fixpoint, depth-first labeling and branch-and-bound minimization.

mod basic;
mod domain;
mod search;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use basic::{Linear, NotEqual, ObjectiveBound};
pub use domain::{Domain, Empty};
pub use search::{SearchLimits, SearchOutcome, SearchStats, SearchStatus, Solution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("empty initial domain {lo}..{hi}")]
    EmptyDomain { lo: i32, hi: i32 },
    #[error("propagator refers to unknown variable {0}")]
    UnknownVar(IntVar),
}

/// Handle to a decision variable of a [`Model`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVar(pub(crate) u32);

impl IntVar {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for IntVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Either a variable or a fixed integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Var(IntVar),
    Const(i32),
}

impl From<IntVar> for Term {
    fn from(v: IntVar) -> Self {
        Term::Var(v)
    }
}

impl From<i32> for Term {
    fn from(c: i32) -> Self {
        Term::Const(c)
    }
}

impl Term {
    pub fn var(&self) -> Option<IntVar> {
        match *self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

/// Propagation result; `Err` means some domain was wiped out.
pub type PropResult = Result<(), Empty>;

/// Domains of all variables plus the change log read by the scheduler.
#[derive(Debug, Clone)]
pub struct Store {
    doms: Vec<Domain>,
    modified: Vec<IntVar>,
    objective_ub: Option<i64>,
}

impl Store {
    fn new() -> Self {
        Store { doms: Vec::new(), modified: Vec::new(), objective_ub: None }
    }

    #[inline]
    pub fn dom(&self, v: IntVar) -> &Domain {
        &self.doms[v.index()]
    }

    #[inline]
    pub fn min(&self, v: IntVar) -> i32 {
        self.doms[v.index()].min()
    }

    #[inline]
    pub fn max(&self, v: IntVar) -> i32 {
        self.doms[v.index()].max()
    }

    #[inline]
    pub fn tmin(&self, t: Term) -> i32 {
        match t {
            Term::Var(v) => self.min(v),
            Term::Const(c) => c,
        }
    }

    #[inline]
    pub fn tmax(&self, t: Term) -> i32 {
        match t {
            Term::Var(v) => self.max(v),
            Term::Const(c) => c,
        }
    }

    pub fn is_fixed(&self, v: IntVar) -> bool {
        self.doms[v.index()].is_fixed()
    }

    /// Upper bound on the objective installed by branch-and-bound.
    pub fn objective_ub(&self) -> Option<i64> {
        self.objective_ub
    }

    fn note(&mut self, v: IntVar, changed: bool) {
        if changed {
            self.modified.push(v);
        }
    }

    pub fn set_min(&mut self, v: IntVar, lo: i32) -> PropResult {
        let c = self.doms[v.index()].remove_below(lo)?;
        self.note(v, c);
        Ok(())
    }

    pub fn set_max(&mut self, v: IntVar, hi: i32) -> PropResult {
        let c = self.doms[v.index()].remove_above(hi)?;
        self.note(v, c);
        Ok(())
    }

    pub fn remove(&mut self, v: IntVar, val: i32) -> PropResult {
        let c = self.doms[v.index()].remove_value(val)?;
        self.note(v, c);
        Ok(())
    }

    pub fn remove_range(&mut self, v: IntVar, lo: i32, hi: i32) -> PropResult {
        let c = self.doms[v.index()].remove_range(lo, hi)?;
        self.note(v, c);
        Ok(())
    }

    pub fn assign(&mut self, v: IntVar, val: i32) -> PropResult {
        let c = self.doms[v.index()].assign(val)?;
        self.note(v, c);
        Ok(())
    }

    /// Term versions: narrowing a constant either holds or fails.
    pub fn tset_min(&mut self, t: Term, lo: i32) -> PropResult {
        match t {
            Term::Var(v) => self.set_min(v, lo),
            Term::Const(c) if c >= lo => Ok(()),
            Term::Const(_) => Err(Empty),
        }
    }

    pub fn tset_max(&mut self, t: Term, hi: i32) -> PropResult {
        match t {
            Term::Var(v) => self.set_max(v, hi),
            Term::Const(c) if c <= hi => Ok(()),
            Term::Const(_) => Err(Empty),
        }
    }

    pub fn values(&self) -> Vec<Option<i32>> {
        self.doms.iter().map(Domain::value).collect()
    }
}

/// A filtering unit. Must be monotone: it only ever removes values, and
/// removes only values that belong to no solution of its constraint.
pub trait Propagator: Send + Sync {
    fn name(&self) -> &'static str;
    /// Variables whose changes should wake this propagator.
    fn vars(&self) -> Vec<IntVar>;
    fn propagate(&self, store: &mut Store) -> PropResult;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationStatus {
    Stable,
    Failed,
}

/// Variables, propagators and an optional sum objective.
pub struct Model {
    store: Store,
    props: Vec<Box<dyn Propagator>>,
    watchers: Vec<Vec<usize>>,
    objective: Option<usize>,
    pub stats: SearchStats,
}

impl Default for Model {
    fn default() -> Self {
        Self::new()
    }
}

impl Model {
    pub fn new() -> Self {
        Model {
            store: Store::new(),
            props: Vec::new(),
            watchers: Vec::new(),
            objective: None,
            stats: SearchStats::default(),
        }
    }

    pub fn add_var(&mut self, lo: i32, hi: i32) -> Result<IntVar, EngineError> {
        let dom = Domain::new(lo, hi).ok_or(EngineError::EmptyDomain { lo, hi })?;
        let id = IntVar(self.store.doms.len() as u32);
        self.store.doms.push(dom);
        self.watchers.push(Vec::new());
        Ok(id)
    }

    pub fn num_vars(&self) -> usize {
        self.store.doms.len()
    }

    pub fn num_propagators(&self) -> usize {
        self.props.len()
    }

    pub fn propagator_names(&self) -> Vec<&'static str> {
        self.props.iter().map(|p| p.name()).collect()
    }

    pub fn domain(&self, v: IntVar) -> &Domain {
        self.store.dom(v)
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn post<P: Propagator + 'static>(&mut self, p: P) -> Result<(), EngineError> {
        self.post_boxed(Box::new(p)).map(|_| ())
    }

    fn post_boxed(&mut self, p: Box<dyn Propagator>) -> Result<usize, EngineError> {
        let id = self.props.len();
        let mut vars = p.vars();
        vars.sort();
        vars.dedup();
        for v in &vars {
            if v.index() >= self.watchers.len() {
                return Err(EngineError::UnknownVar(*v));
            }
        }
        for v in vars {
            self.watchers[v.index()].push(id);
        }
        self.props.push(p);
        Ok(id)
    }

    /// Declares `Σ vars` as the quantity to minimize.
    pub fn set_objective(&mut self, vars: Vec<IntVar>) -> Result<(), EngineError> {
        let id = self.post_boxed(Box::new(ObjectiveBound::new(vars)))?;
        self.objective = Some(id);
        Ok(())
    }

    /// Runs every propagator to a common fixpoint.
    pub fn propagate(&mut self) -> PropagationStatus {
        let all: Vec<usize> = (0..self.props.len()).collect();
        match self.fixpoint(&all) {
            Ok(()) => PropagationStatus::Stable,
            Err(Empty) => PropagationStatus::Failed,
        }
    }

    fn fixpoint(&mut self, seed: &[usize]) -> PropResult {
        let n = self.props.len();
        let mut queued = vec![false; n];
        let mut queue = VecDeque::with_capacity(n);
        for &p in seed {
            if !queued[p] {
                queued[p] = true;
                queue.push_back(p);
            }
        }
        self.store.modified.clear();
        while let Some(p) = queue.pop_front() {
            queued[p] = false;
            let r = self.props[p].propagate(&mut self.store);
            if r.is_err() {
                self.store.modified.clear();
                return r;
            }
            for i in 0..self.store.modified.len() {
                let v = self.store.modified[i];
                for &w in &self.watchers[v.index()] {
                    if !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            self.store.modified.clear();
        }
        Ok(())
    }

    /// Runs a fixpoint seeded by the watchers of `vars` (plus the objective).
    fn propagate_from(&mut self, vars: &[IntVar]) -> PropResult {
        let mut seed: Vec<usize> = vars.iter().flat_map(|v| self.watchers[v.index()].iter().copied()).collect();
        seed.extend(self.objective);
        self.fixpoint(&seed)
    }
}
