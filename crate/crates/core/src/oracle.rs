//! Exhaustive optimal packer over explicit cell grids.
//!
//! Candidate boxes are tried in ascending half-perimeter; inside a box the
//! pieces are placed depth-first in input order over every legal orientation
//! and origin. The only geometry it relies on is [`cells`].

use thiserror::Error;

use crate::geometry::{cells, orientations, Instance, Layout, Mode, Placement};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Optimal { objective: i64, layout: Layout },
    Infeasible,
}

impl OracleResult {
    pub fn objective(&self) -> Option<i64> {
        match self {
            OracleResult::Optimal { objective, .. } => Some(*objective),
            OracleResult::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget of {budget} placement attempts exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("grid wider than 64 cells is not supported (max_end_x = {0})")]
    TooWide(i32),
}

/// Set of occupied unit cells, one bitmask per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occupancy {
    width: i32,
    rows: Vec<u64>,
}

impl Occupancy {
    pub fn new(width: i32, height: i32) -> Self {
        assert!((0..=64).contains(&width));
        Occupancy { width, rows: vec![0; height.max(0) as usize] }
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.rows.len() as i32
    }

    pub fn count(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn is_set(&self, x: i32, y: i32) -> bool {
        (0..self.width).contains(&x) && (0..self.height()).contains(&y) && self.rows[y as usize] >> x & 1 == 1
    }

    fn fits(&self, shape: &Shape) -> bool {
        shape.rows.iter().enumerate().all(|(i, m)| self.rows[shape.y as usize + i] & m == 0)
    }

    fn toggle(&mut self, shape: &Shape) {
        for (i, m) in shape.rows.iter().enumerate() {
            self.rows[shape.y as usize + i] ^= m;
        }
    }
}

/// One orientation of a piece at one origin, as row masks starting at row `y`.
#[derive(Debug, Clone)]
struct Shape {
    orient: usize,
    x: i32,
    y: i32,
    rows: Vec<u64>,
}

fn shapes(instance: &Instance, width: i32, height: i32, first: bool) -> Vec<Vec<Shape>> {
    instance
        .pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            let mut out = Vec::new();
            for op in orientations(piece, instance.mode) {
                if op.w > width || op.h > height {
                    continue;
                }
                // mirror symmetry of the box: the first piece may stay in the left half
                let max_x = if first && i == 0 && instance.mode == Mode::RotMirror {
                    (width - op.w) / 2
                } else {
                    width - op.w
                };
                for y in 0..=height - op.h {
                    for x in 0..=max_x {
                        let mut rows = vec![0u64; op.h as usize];
                        for (cx, cy) in cells(&op, (x, y)) {
                            rows[(cy - y) as usize] |= 1 << cx;
                        }
                        out.push(Shape { orient: op.orient, x, y, rows });
                    }
                }
            }
            out
        })
        .collect()
}

struct Search<'a> {
    shapes: &'a [Vec<Shape>],
    grid: Occupancy,
    chosen: Vec<usize>,
    attempts: u64,
    budget: u64,
}

impl Search<'_> {
    fn place(&mut self, depth: usize) -> Result<bool, OracleError> {
        if depth == self.shapes.len() {
            return Ok(true);
        }
        for (k, shape) in self.shapes[depth].iter().enumerate() {
            self.attempts += 1;
            if self.attempts > self.budget {
                return Err(OracleError::BudgetExceeded { budget: self.budget });
            }
            if !self.grid.fits(shape) {
                continue;
            }
            self.grid.toggle(shape);
            self.chosen.push(k);
            if self.place(depth + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.grid.toggle(shape);
        }
        Ok(false)
    }
}

/// Smallest `end_x + end_y` over all valid layouts, with a witness.
pub fn brute_force_optimal(instance: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    if instance.max_end_x > 64 {
        return Err(OracleError::TooWide(instance.max_end_x));
    }
    let total = instance.total_area();
    let mut boxes: Vec<(i32, i32)> = (1..=instance.max_end_x)
        .flat_map(|x| (1..=instance.max_end_y).map(move |y| (x, y)))
        .filter(|&(x, y)| i64::from(x) * i64::from(y) >= total)
        .collect();
    boxes.sort_by_key(|&(x, y)| (x + y, x));

    let mut attempts = 0u64;
    for (bx, by) in boxes {
        let table = shapes(instance, bx, by, true);
        let mut search = Search {
            shapes: &table,
            grid: Occupancy::new(bx, by),
            chosen: Vec::with_capacity(table.len()),
            attempts,
            budget,
        };
        let found = search.place(0)?;
        attempts = search.attempts;
        if found {
            debug_assert_eq!(i64::from(search.grid.count()), total);
            let placements = instance
                .pieces
                .iter()
                .zip(&search.chosen)
                .zip(&table)
                .map(|((piece, &k), options)| {
                    let s = &options[k];
                    Placement { piece_id: piece.id, orient: s.orient, x: s.x, y: s.y }
                })
                .collect();
            return Ok(OracleResult::Optimal {
                objective: i64::from(bx + by),
                layout: Layout { placements, end_x: bx, end_y: by },
            });
        }
    }
    Ok(OracleResult::Infeasible)
}
