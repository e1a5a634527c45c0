//! The four packing models (fixed or rotating pieces, with rectangular or
//! step-profile cumulative relaxations) and the solve driver.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::constraints::{
    post_cumulative, post_diffn, post_orientation_link, post_trapezoid_cumulative, CumTask, OrientationLink,
    RectView, TrapPart, TrapTask,
};
use crate::engine::{
    EngineError, IntVar, Linear, Model, PropagationStatus, SearchLimits, SearchStats, SearchStatus, Solution, Term,
};
use crate::geometry::{orientations, profiles, Instance, Layout, OrientedPiece, Placement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown {kind} '{value}'")]
    UnknownOption { kind: &'static str, value: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Which redundant cumulative relaxations are posted next to diffn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relaxation {
    None,
    Cumulative,
    Trapeze,
    Both,
}

impl Relaxation {
    pub const ALL: [Relaxation; 4] = [Relaxation::None, Relaxation::Cumulative, Relaxation::Trapeze, Relaxation::Both];

    pub fn has_cumulative(self) -> bool {
        matches!(self, Relaxation::Cumulative | Relaxation::Both)
    }

    pub fn has_trapeze(self) -> bool {
        matches!(self, Relaxation::Trapeze | Relaxation::Both)
    }
}

/// Capacity of the per-axis relaxations: tied to the other axis's end,
/// or a free variable over the same range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityBinding {
    Free,
    Tied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Per piece: orientation, x, y.
    Default,
    /// All x origins, then all y origins, then orientations.
    Paper,
}

macro_rules! string_enum {
    ($ty:ident, $kind:literal, $($variant:ident => $name:literal),+ $(,)?) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $name,)+ })
            }
        }

        impl FromStr for $ty {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(ModelError::UnknownOption { kind: $kind, value: s.to_string() }),
                }
            }
        }
    };
}

string_enum!(Relaxation, "relaxation", None => "none", Cumulative => "cumulative", Trapeze => "trapeze", Both => "both");
string_enum!(CapacityBinding, "capacity binding", Free => "free", Tied => "tied");
string_enum!(Strategy, "strategy", Default => "default", Paper => "paper");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelConfig {
    pub relaxation: Relaxation,
    pub optimize: bool,
    pub capacity_binding: CapacityBinding,
    pub time_limit: Option<Duration>,
    pub strategy: Strategy,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            relaxation: Relaxation::Both,
            optimize: true,
            capacity_binding: CapacityBinding::Tied,
            time_limit: None,
            strategy: Strategy::Default,
        }
    }
}

/// Variables of one sub-rectangle slot.
#[derive(Debug, Clone, Copy)]
pub struct RectVars {
    pub x: IntVar,
    pub y: IntVar,
    pub w: Term,
    pub h: Term,
}

/// All variables describing one piece.
#[derive(Debug, Clone)]
pub struct PlacementVars {
    pub piece_id: usize,
    pub orient: IntVar,
    pub x: IntVar,
    pub y: IntVar,
    pub w: Term,
    pub h: Term,
    /// `x + w` and `y + h`.
    pub end_x: IntVar,
    pub end_y: IntVar,
    pub rects: Vec<RectVars>,
    pub x_parts: Vec<TrapPart>,
    pub y_parts: Vec<TrapPart>,
}

pub struct PackingModel {
    pub model: Model,
    pub pieces: Vec<PlacementVars>,
    pub end_x: IntVar,
    pub end_y: IntVar,
    /// Capacities of the x-axis and y-axis relaxations, when posted.
    pub caps: Option<(IntVar, IntVar)>,
    pub orientations: Vec<Vec<OrientedPiece>>,
}

/// Collects per-row data for one piece and turns it into link targets.
struct LinkBuilder<'m> {
    model: &'m mut Model,
    link: OrientationLink,
}

impl LinkBuilder<'_> {
    /// A dimension that may differ between rows; constant if it does not.
    fn valued(&mut self, values: Vec<i32>) -> Result<Term, EngineError> {
        let (lo, hi) = min_max(&values);
        if lo == hi {
            return Ok(Term::Const(lo));
        }
        let v = self.model.add_var(lo, hi)?;
        self.link.valued(v, values);
        Ok(Term::Var(v))
    }

    /// A position `anchor + offset[row]`.
    fn anchored(&mut self, anchor: IntVar, offsets: Vec<i32>) -> Result<IntVar, EngineError> {
        let (lo, hi) = min_max(&offsets);
        let d = *self.model.domain(anchor);
        let v = self.model.add_var(d.min() + lo, d.max() + hi)?;
        self.link.anchored(anchor, v, offsets);
        Ok(v)
    }

    fn parts(&mut self, rows: &[Vec<(i32, i32)>]) -> Result<Vec<TrapPart>, EngineError> {
        let slots = rows.iter().map(Vec::len).max().unwrap_or(0);
        (0..slots)
            .map(|s| {
                let dur = self.valued(rows.iter().map(|r| r.get(s).map_or(0, |p| p.0)).collect())?;
                let height = self.valued(rows.iter().map(|r| r.get(s).map_or(0, |p| p.1)).collect())?;
                Ok(TrapPart { dur, height })
            })
            .collect()
    }
}

fn min_max(v: &[i32]) -> (i32, i32) {
    (*v.iter().min().expect("non-empty"), *v.iter().max().expect("non-empty"))
}

/// Posts the full constraint network for an instance.
pub fn build_model(instance: &Instance, config: &ModelConfig) -> Result<PackingModel, ModelError> {
    let mut model = Model::new();
    let end_x = model.add_var(1, instance.max_end_x)?;
    let end_y = model.add_var(1, instance.max_end_y)?;

    let mut pieces = Vec::with_capacity(instance.pieces.len());
    let mut tables = Vec::with_capacity(instance.pieces.len());
    for piece in &instance.pieces {
        let rows = orientations(piece, instance.mode);
        let orient = model.add_var(0, rows.len() as i32 - 1)?;
        let x = model.add_var(0, instance.max_end_x - 1)?;
        let y = model.add_var(0, instance.max_end_y - 1)?;
        let mut b = LinkBuilder { link: OrientationLink::new(orient, rows.len()), model: &mut model };

        let w = b.valued(rows.iter().map(|r| r.w).collect())?;
        let h = b.valued(rows.iter().map(|r| r.h).collect())?;
        let px_end = b.anchored(x, rows.iter().map(|r| r.w).collect())?;
        let py_end = b.anchored(y, rows.iter().map(|r| r.h).collect())?;

        let slots = rows.iter().map(|r| r.rects.len()).max().unwrap_or(0);
        let mut rects = Vec::with_capacity(slots);
        for s in 0..slots {
            let pick = |f: fn(&crate::geometry::SubRect) -> i32| -> Vec<i32> {
                rows.iter().map(|r| r.rects.get(s).map_or(0, f)).collect()
            };
            let rx = b.anchored(x, pick(|r| r.x))?;
            let ry = b.anchored(y, pick(|r| r.y))?;
            let rw = b.valued(pick(|r| r.w))?;
            let rh = b.valued(pick(|r| r.h))?;
            rects.push(RectVars { x: rx, y: ry, w: rw, h: rh });
        }

        let profs: Vec<_> = rows.iter().map(profiles).collect();
        let flat = |p: &crate::geometry::StepProfile| p.parts.iter().map(|q| (q.dur, q.height())).collect::<Vec<_>>();
        let x_parts = b.parts(&profs.iter().map(|(px, _)| flat(px)).collect::<Vec<_>>())?;
        let y_parts = b.parts(&profs.iter().map(|(_, py)| flat(py)).collect::<Vec<_>>())?;

        let link = b.link;
        post_orientation_link(&mut model, link)?;
        model.post(Linear::le(vec![(1, px_end), (-1, end_x)], 0))?;
        model.post(Linear::le(vec![(1, py_end), (-1, end_y)], 0))?;

        pieces.push(PlacementVars {
            piece_id: piece.id,
            orient,
            x,
            y,
            w,
            h,
            end_x: px_end,
            end_y: py_end,
            rects,
            x_parts,
            y_parts,
        });
        tables.push(rows);
    }

    let all_rects: Vec<RectView> =
        pieces.iter().flat_map(|p| p.rects.iter().map(|r| RectView { x: r.x, y: r.y, w: r.w, h: r.h })).collect();
    post_diffn(&mut model, all_rects, Some((end_x, end_y)))?;

    let mut caps = None;
    if config.relaxation != Relaxation::None {
        let (cap_x, cap_y) = match config.capacity_binding {
            CapacityBinding::Tied => (end_y, end_x),
            CapacityBinding::Free => (model.add_var(1, instance.max_end_y)?, model.add_var(1, instance.max_end_x)?),
        };
        caps = Some((cap_x, cap_y));
        if config.relaxation.has_cumulative() {
            let rects = || pieces.iter().flat_map(|p| p.rects.iter());
            let on_x = rects().map(|r| CumTask { origin: r.x, dur: r.w, height: r.h }).collect();
            let on_y = rects().map(|r| CumTask { origin: r.y, dur: r.h, height: r.w }).collect();
            post_cumulative(&mut model, on_x, cap_x, end_x)?;
            post_cumulative(&mut model, on_y, cap_y, end_y)?;
        }
        if config.relaxation.has_trapeze() {
            let on_x = pieces.iter().map(|p| TrapTask { origin: p.x, parts: p.x_parts.clone() }).collect();
            let on_y = pieces.iter().map(|p| TrapTask { origin: p.y, parts: p.y_parts.clone() }).collect();
            post_trapezoid_cumulative(&mut model, on_x, cap_x, end_x)?;
            post_trapezoid_cumulative(&mut model, on_y, cap_y, end_y)?;
        }
    }
    model.set_objective(vec![end_x, end_y])?;

    Ok(PackingModel { model, pieces, end_x, end_y, caps, orientations: tables })
}

/// Branching order over the decision variables; variables already fixed
/// when the model is built are left out.
pub fn variable_order(pm: &PackingModel, strategy: Strategy) -> Vec<IntVar> {
    let order: Vec<IntVar> = match strategy {
        Strategy::Default => pm.pieces.iter().flat_map(|p| [p.orient, p.x, p.y]).collect(),
        Strategy::Paper => {
            let xs = pm.pieces.iter().map(|p| p.x);
            let ys = pm.pieces.iter().map(|p| p.y);
            let os = pm.pieces.iter().map(|p| p.orient);
            xs.chain(ys).chain(os).collect()
        }
    };
    order.into_iter().filter(|v| !pm.model.domain(*v).is_fixed()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Timeout => "timeout",
        })
    }
}

impl FromStr for Status {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(Status::Optimal),
            "feasible" => Ok(Status::Feasible),
            "infeasible" => Ok(Status::Infeasible),
            "timeout" => Ok(Status::Timeout),
            _ => Err(ModelError::UnknownOption { kind: "status", value: s.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub layout: Option<Layout>,
    pub objective: Option<i64>,
    pub stats: SearchStats,
}

impl PackingModel {
    pub fn layout(&self, s: &Solution) -> Layout {
        Layout {
            placements: self
                .pieces
                .iter()
                .map(|p| Placement {
                    piece_id: p.piece_id,
                    orient: s.value(p.orient) as usize,
                    x: s.value(p.x),
                    y: s.value(p.y),
                })
                .collect(),
            end_x: s.value(self.end_x),
            end_y: s.value(self.end_y),
        }
    }
}

/// Builds the model and searches it: branch-and-bound on `end_x + end_y`
/// when optimizing, first solution otherwise.
pub fn solve(instance: &Instance, config: &ModelConfig) -> Outcome {
    let mut pm = build_model(instance, config).expect("model variables are created before use");
    if pm.model.propagate() == PropagationStatus::Failed {
        return Outcome { status: Status::Infeasible, layout: None, objective: None, stats: SearchStats::default() };
    }
    let order = variable_order(&pm, config.strategy);
    let limits = SearchLimits { time_limit: config.time_limit };
    let objective = [pm.end_x, pm.end_y];
    let out = if config.optimize {
        pm.model.minimize(&order, &objective, &limits)
    } else {
        pm.model.label(&order, &limits)
    };
    let layout = out.solution.as_ref().map(|s| pm.layout(s));
    let objective = layout.as_ref().map(|l| i64::from(l.end_x) + i64::from(l.end_y));
    let status = match (out.status, &layout) {
        (SearchStatus::Timeout, _) => Status::Timeout,
        (SearchStatus::Complete, None) => Status::Infeasible,
        (SearchStatus::Complete, Some(_)) if config.optimize => Status::Optimal,
        (SearchStatus::Complete, Some(_)) => Status::Feasible,
    };
    Outcome { status, layout, objective, stats: pm.model.stats.clone() }
}
