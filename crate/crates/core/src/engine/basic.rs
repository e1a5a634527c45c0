use super::{Empty, IntVar, PropResult, Propagator, Store};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Le,
    Eq,
}

/// `Σ coef·var ≤ rhs` or `Σ coef·var = rhs`, bounds propagation.
#[derive(Debug, Clone)]
pub struct Linear {
    terms: Vec<(i64, IntVar)>,
    rhs: i64,
    rel: Relation,
}

impl Linear {
    pub fn le(terms: Vec<(i32, IntVar)>, rhs: i32) -> Self {
        Linear { terms: terms.into_iter().map(|(c, v)| (i64::from(c), v)).collect(), rhs: i64::from(rhs), rel: Relation::Le }
    }

    pub fn ge(terms: Vec<(i32, IntVar)>, rhs: i32) -> Self {
        Linear {
            terms: terms.into_iter().map(|(c, v)| (-i64::from(c), v)).collect(),
            rhs: -i64::from(rhs),
            rel: Relation::Le,
        }
    }

    pub fn eq(terms: Vec<(i32, IntVar)>, rhs: i32) -> Self {
        Linear { rel: Relation::Eq, ..Linear::le(terms, rhs) }
    }

    fn negated(&self) -> Linear {
        Linear { terms: self.terms.iter().map(|&(c, v)| (-c, v)).collect(), rhs: -self.rhs, rel: Relation::Le }
    }

    fn propagate_le(terms: &[(i64, IntVar)], rhs: i64, store: &mut Store) -> PropResult {
        let lo = |s: &Store, c: i64, v: IntVar| if c >= 0 { c * i64::from(s.min(v)) } else { c * i64::from(s.max(v)) };
        let min_sum: i64 = terms.iter().map(|&(c, v)| lo(store, c, v)).sum();
        if min_sum > rhs {
            return Err(Empty);
        }
        let slack = rhs - min_sum;
        for &(c, v) in terms {
            if c == 0 {
                continue;
            }
            // c·v ≤ lo(v) + slack
            let bound = lo(store, c, v) + slack;
            if c > 0 {
                store.set_max(v, clamp(bound.div_euclid(c)))?;
            } else {
                let q = -c;
                // v ≥ ceil(-bound / q)
                store.set_min(v, clamp(-(bound.div_euclid(q))))?;
            }
        }
        Ok(())
    }
}

fn clamp(v: i64) -> i32 {
    v.clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32
}

impl Propagator for Linear {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn vars(&self) -> Vec<IntVar> {
        self.terms.iter().map(|&(_, v)| v).collect()
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        Linear::propagate_le(&self.terms, self.rhs, store)?;
        if self.rel == Relation::Eq {
            let n = self.negated();
            Linear::propagate_le(&n.terms, n.rhs, store)?;
        }
        Ok(())
    }
}

/// `x ≠ y`.
#[derive(Debug, Clone, Copy)]
pub struct NotEqual(pub IntVar, pub IntVar);

impl Propagator for NotEqual {
    fn name(&self) -> &'static str {
        "not_equal"
    }

    fn vars(&self) -> Vec<IntVar> {
        vec![self.0, self.1]
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        if let Some(v) = store.dom(self.0).value() {
            store.remove(self.1, v)?;
        }
        if let Some(v) = store.dom(self.1).value() {
            store.remove(self.0, v)?;
        }
        Ok(())
    }
}

/// `Σ vars ≤ ub`, where `ub` is the incumbent bound held by the store.
#[derive(Debug, Clone)]
pub struct ObjectiveBound {
    vars: Vec<IntVar>,
}

impl ObjectiveBound {
    pub fn new(vars: Vec<IntVar>) -> Self {
        ObjectiveBound { vars }
    }
}

impl Propagator for ObjectiveBound {
    fn name(&self) -> &'static str {
        "objective"
    }

    fn vars(&self) -> Vec<IntVar> {
        self.vars.clone()
    }

    fn propagate(&self, store: &mut Store) -> PropResult {
        match store.objective_ub() {
            Some(ub) => {
                let terms: Vec<(i64, IntVar)> = self.vars.iter().map(|&v| (1, v)).collect();
                Linear::propagate_le(&terms, ub, store)
            }
            None => Ok(()),
        }
    }
}
