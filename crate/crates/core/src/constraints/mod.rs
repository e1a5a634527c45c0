//! Global constraints used by the packing models.

mod cumulative;
mod diffn;
mod link;

pub use cumulative::{CumTask, Cumulative, TrapPart, TrapTask, TrapezoidCumulative};
pub use diffn::{Diffn, RectView};
pub use link::{AnchoredTarget, OrientationLink, ValuedTarget};

use crate::engine::{EngineError, IntVar, Model};

pub fn post_orientation_link(model: &mut Model, link: OrientationLink) -> Result<(), EngineError> {
    model.post(link)
}

pub fn post_diffn(model: &mut Model, rects: Vec<RectView>, extents: Option<(IntVar, IntVar)>) -> Result<(), EngineError> {
    model.post(Diffn::new(rects, extents))
}

pub fn post_cumulative(model: &mut Model, tasks: Vec<CumTask>, cap: IntVar, end: IntVar) -> Result<(), EngineError> {
    model.post(Cumulative::new(tasks, cap, end))
}

pub fn post_trapezoid_cumulative(
    model: &mut Model,
    tasks: Vec<TrapTask>,
    cap: IntVar,
    end: IntVar,
) -> Result<(), EngineError> {
    model.post(TrapezoidCumulative::new(tasks, cap, end))
}
