use crate::engine::{Empty, IntVar, PropResult, Propagator, Store, Term};

/// A rectangle whose corner and size are decision terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectView {
    pub x: IntVar,
    pub y: IntVar,
    pub w: Term,
    pub h: Term,
}

/// Pairwise interior-disjointness of rectangles, optionally confined to
/// `[0, end_x] x [0, end_y]`.
///
/// Filtering: containment bounds against the extents, a volume check
/// (the summed minimal areas must fit the largest admissible box), and
/// pairwise forbidden regions: when two rectangles certainly overlap on
/// one axis, the positions where they would certainly overlap on the
/// other axis are removed.
#[derive(Debug, Clone)]
pub struct Diffn {
    rects: Vec<RectView>,
    extents: Option<(IntVar, IntVar)>,
}

impl Diffn {
    pub fn new(rects: Vec<RectView>, extents: Option<(IntVar, IntVar)>) -> Self {
        Diffn { rects, extents }
    }
}

/// Interval surely covered by `[o, o + len)` for every admissible value.
fn compulsory(store: &Store, o: IntVar, len: Term) -> (i32, i32) {
    (store.max(o), store.min(o) + store.tmin(len))
}

fn certainly_overlap(a: (i32, i32), b: (i32, i32)) -> bool {
    a.0.max(b.0) < a.1.min(b.1)
}

fn contain(store: &mut Store, o: IntVar, len: Term, end: IntVar) -> PropResult {
    store.set_min(o, 0)?;
    store.set_min(end, store.min(o) + store.tmin(len))?;
    store.set_max(o, store.max(end) - store.tmin(len))?;
    store.tset_max(len, store.max(end) - store.min(o))
}

impl Propagator for Diffn {
    fn name(&self) -> &'static str {
        "diffn"
    }

    fn vars(&self) -> Vec<IntVar> {
        let mut vs: Vec<IntVar> =
            self.rects.iter().flat_map(|r| [Some(r.x), Some(r.y), r.w.var(), r.h.var()]).flatten().collect();
        if let Some((ex, ey)) = self.extents {
            vs.extend([ex, ey]);
        }
        vs
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        if let Some((ex, ey)) = self.extents {
            for r in &self.rects {
                contain(store, r.x, r.w, ex)?;
                contain(store, r.y, r.h, ey)?;
            }
            let volume: i64 = self.rects.iter().map(|r| i64::from(store.tmin(r.w)) * i64::from(store.tmin(r.h))).sum();
            if volume > 0 {
                let (mx, my) = (i64::from(store.max(ex)), i64::from(store.max(ey)));
                if mx <= 0 || my <= 0 || mx * my < volume {
                    return Err(Empty);
                }
                store.set_min(ex, div_ceil(volume, my))?;
                store.set_min(ey, div_ceil(volume, mx))?;
            }
        }

        let n = self.rects.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a, b) = (self.rects[i], self.rects[j]);
                let solid = |r: RectView| store.tmin(r.w) >= 1 && store.tmin(r.h) >= 1;
                if !solid(a) || !solid(b) {
                    continue;
                }
                if certainly_overlap(compulsory(store, a.y, a.h), compulsory(store, b.y, b.h)) {
                    forbid(store, a.x, a.w, b.x, b.w)?;
                }
                if certainly_overlap(compulsory(store, a.x, a.w), compulsory(store, b.x, b.w)) {
                    forbid(store, a.y, a.h, b.y, b.h)?;
                }
            }
        }
        Ok(())
    }
}

/// Removes the origins of `a` at which it surely overlaps `b` on this axis.
fn forbid(store: &mut Store, a: IntVar, a_len: Term, b: IntVar, b_len: Term) -> PropResult {
    let lo = store.max(b) - store.tmin(a_len) + 1;
    let hi = store.min(b) + store.tmin(b_len) - 1;
    if lo <= hi {
        store.remove_range(a, lo, hi)?;
    }
    Ok(())
}

pub(crate) fn div_ceil(a: i64, b: i64) -> i32 {
    let q = a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0);
    q.clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32
}
