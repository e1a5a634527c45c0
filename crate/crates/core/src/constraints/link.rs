use crate::engine::{IntVar, PropResult, Propagator, Store};

/// `target = anchor + offsets[o]` under orientation `o`.
#[derive(Debug, Clone)]
pub struct AnchoredTarget {
    pub anchor: IntVar,
    pub target: IntVar,
    pub offsets: Vec<i32>,
}

/// `target = values[o]` under orientation `o`.
#[derive(Debug, Clone)]
pub struct ValuedTarget {
    pub target: IntVar,
    pub values: Vec<i32>,
}

/// Ties every placement, dimension and profile variable of one piece to its
/// orientation variable. Row `o` of the table describes orientation value
/// `o`; the constraint holds iff some row in the orientation domain agrees
/// with all targets.
#[derive(Debug, Clone)]
pub struct OrientationLink {
    orient: IntVar,
    rows: usize,
    anchored: Vec<AnchoredTarget>,
    valued: Vec<ValuedTarget>,
}

impl OrientationLink {
    pub fn new(orient: IntVar, rows: usize) -> Self {
        OrientationLink { orient, rows, anchored: Vec::new(), valued: Vec::new() }
    }

    pub fn anchored(&mut self, anchor: IntVar, target: IntVar, offsets: Vec<i32>) -> &mut Self {
        assert_eq!(offsets.len(), self.rows, "one offset per row");
        self.anchored.push(AnchoredTarget { anchor, target, offsets });
        self
    }

    pub fn valued(&mut self, target: IntVar, values: Vec<i32>) -> &mut Self {
        assert_eq!(values.len(), self.rows, "one value per row");
        self.valued.push(ValuedTarget { target, values });
        self
    }

    pub fn orient(&self) -> IntVar {
        self.orient
    }

    fn row_supported(&self, store: &Store, o: usize) -> bool {
        let valued_ok = self.valued.iter().all(|t| store.dom(t.target).contains(t.values[o]));
        valued_ok
            && self.anchored.iter().all(|t| {
                let off = t.offsets[o];
                match store.dom(t.anchor).value() {
                    Some(a) => store.dom(t.target).contains(a + off),
                    None => store.min(t.anchor) + off <= store.max(t.target) && store.max(t.anchor) + off >= store.min(t.target),
                }
            })
    }
}

impl Propagator for OrientationLink {
    fn name(&self) -> &'static str {
        "orientation_link"
    }

    fn vars(&self) -> Vec<IntVar> {
        let mut vs = vec![self.orient];
        vs.extend(self.valued.iter().map(|t| t.target));
        vs.extend(self.anchored.iter().flat_map(|t| [t.anchor, t.target]));
        vs
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        store.set_min(self.orient, 0)?;
        store.set_max(self.orient, self.rows as i32 - 1)?;
        let candidates: Vec<i32> = store.dom(self.orient).iter().collect();
        let mut rows = Vec::with_capacity(candidates.len());
        for o in candidates {
            if self.row_supported(store, o as usize) {
                rows.push(o as usize);
            } else {
                store.remove(self.orient, o)?;
            }
        }

        for t in &self.valued {
            let lo = rows.iter().map(|&o| t.values[o]).min().expect("orient domain non-empty");
            let hi = rows.iter().map(|&o| t.values[o]).max().expect("orient domain non-empty");
            store.set_min(t.target, lo)?;
            store.set_max(t.target, hi)?;
            let stray: Vec<i32> = store.dom(t.target).iter().filter(|v| !rows.iter().any(|&o| t.values[o] == *v)).collect();
            for v in stray {
                store.remove(t.target, v)?;
            }
        }

        for t in &self.anchored {
            let lo = rows.iter().map(|&o| t.offsets[o]).min().expect("orient domain non-empty");
            let hi = rows.iter().map(|&o| t.offsets[o]).max().expect("orient domain non-empty");
            store.set_min(t.target, store.min(t.anchor) + lo)?;
            store.set_max(t.target, store.max(t.anchor) + hi)?;
            store.set_min(t.anchor, store.min(t.target) - hi)?;
            store.set_max(t.anchor, store.max(t.target) - lo)?;
        }
        Ok(())
    }
}
