//! L-shaped pieces ("angles"): classification, decomposition into
//! rectangles, orientation enumeration, axis profiles, rasterization and
//! layout validation.
//!
//! A piece is written `[a, b, c, d]`: the lengths of its bottom, right, top
//! and left outer edges, read in a frame where x grows rightward and y
//! grows upward. The notch sits at the corner between the two shorter
//! edges. When `a == c` or `b == d` the piece degenerates to a rectangle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of rigid transforms of the square grid (4 rotations x mirror).
pub const TRANSFORM_COUNT: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("piece {id}: sizes must be positive, got {sizes:?}")]
    NonPositiveSize { id: usize, sizes: [i32; 4] },
    #[error("instance must contain at least one piece")]
    NoPieces,
    #[error("domain caps must be at least 1, got {0}x{1}")]
    BadCaps(i32, i32),
    #[error("unknown piece id {0}")]
    UnknownPiece(usize),
    #[error("piece {piece}: orientation index {orient} out of range")]
    OrientationOutOfRange { piece: usize, orient: usize },
    #[error("piece {0} is placed more than once")]
    DuplicatePlacement(usize),
    #[error("layout has {got} placements, instance has {expected} pieces")]
    PlacementCount { expected: usize, got: usize },
    #[error("piece {piece}: negative origin ({x}, {y})")]
    NegativeOrigin { piece: usize, x: i32, y: i32 },
    #[error("unknown mode '{0}' (expected fixed or rot_mirror)")]
    UnknownMode(String),
}

/// An L-shaped piece given by its four edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnglePiece {
    /// 1-based index within its instance.
    pub id: usize,
    pub a: i32,
    pub b: i32,
    pub c: i32,
    pub d: i32,
}

/// Where the notch of the bounding box sits, or `Rect` for degenerate pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    NotchBL,
    NotchTR,
    NotchTL,
    NotchBR,
    Rect,
}

/// Axis-aligned rectangle with integer corner and size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubRect {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl SubRect {
    pub const fn new(x: i32, y: i32, w: i32, h: i32) -> Self {
        SubRect { x, y, w, h }
    }

    pub fn area(&self) -> i64 {
        i64::from(self.w) * i64::from(self.h)
    }

    pub fn translate(&self, dx: i32, dy: i32) -> SubRect {
        SubRect::new(self.x + dx, self.y + dy, self.w, self.h)
    }
}

/// Rotation (quarter turns counter-clockwise) followed by an optional
/// mirror about the vertical axis. Code = `2 * rotation + mirror`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transform {
    pub quarter_turns: u8,
    pub mirror: bool,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { quarter_turns: 0, mirror: false };

    pub fn from_code(code: usize) -> Transform {
        Transform { quarter_turns: (code / 2 % 4) as u8, mirror: code % 2 == 1 }
    }

    pub fn code(&self) -> usize {
        usize::from(self.quarter_turns) * 2 + usize::from(self.mirror)
    }

    /// Maps a rectangle living in a `w x h` box; returns it with the new box size.
    fn apply(&self, r: SubRect, w: i32, h: i32) -> (SubRect, i32, i32) {
        let (mut r, mut w, mut h) = (r, w, h);
        for _ in 0..self.quarter_turns {
            // (x, y) -> (h - 1 - y, x)
            r = SubRect::new(h - r.y - r.h, r.x, r.h, r.w);
            std::mem::swap(&mut w, &mut h);
        }
        if self.mirror {
            r = SubRect::new(w - r.x - r.w, r.y, r.w, r.h);
        }
        (r, w, h)
    }
}

/// Orientation policy of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Fixed,
    RotMirror,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::RotMirror => "rot_mirror",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(Mode::Fixed),
            "rot_mirror" => Ok(Mode::RotMirror),
            _ => Err(GeometryError::UnknownMode(s.to_string())),
        }
    }
}

/// One constant step of an axis profile: `dur` units long, rising from
/// `start` to `end` (always equal for pieces built here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProfilePart {
    pub dur: i32,
    pub start: i32,
    pub end: i32,
}

impl ProfilePart {
    pub const fn flat(dur: i32, height: i32) -> Self {
        ProfilePart { dur, start: height, end: height }
    }

    /// Height used when the part is evaluated on unit intervals.
    pub fn height(&self) -> i32 {
        self.start.max(self.end)
    }
}

/// Consecutive parts laid from the task origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StepProfile {
    pub parts: Vec<ProfilePart>,
}

impl StepProfile {
    pub fn extent(&self) -> i32 {
        self.parts.iter().map(|p| p.dur).sum()
    }

    pub fn integral(&self) -> i64 {
        self.parts.iter().map(|p| i64::from(p.dur) * i64::from(p.start)).sum()
    }

    /// Collapses a per-unit height sequence into maximal constant runs.
    fn from_columns(heights: &[i32]) -> StepProfile {
        let mut parts: Vec<ProfilePart> = Vec::new();
        for &h in heights {
            match parts.last_mut() {
                Some(last) if last.start == h => last.dur += 1,
                _ => parts.push(ProfilePart::flat(1, h)),
            }
        }
        StepProfile { parts }
    }
}

/// A piece in one concrete orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedPiece {
    pub piece_id: usize,
    /// Position within `orientations(piece, mode)`; 0 is the identity.
    pub orient: usize,
    pub transform: Transform,
    pub w: i32,
    pub h: i32,
    /// Sub-rectangles as offsets from the piece origin.
    pub rects: Vec<SubRect>,
    pub notch_w: i32,
    pub notch_h: i32,
}

/// Placed piece: origin is the bottom-left corner of the bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub piece_id: usize,
    pub orient: usize,
    pub x: i32,
    pub y: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub placements: Vec<Placement>,
    pub end_x: i32,
    pub end_y: i32,
}

/// Problem input: the pieces, the largest admissible enclosing box and
/// the orientation policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub pieces: Vec<AnglePiece>,
    pub max_end_x: i32,
    pub max_end_y: i32,
    pub mode: Mode,
}

impl AnglePiece {
    pub fn new(id: usize, sizes: [i32; 4]) -> Result<Self, GeometryError> {
        if sizes.iter().any(|&s| s < 1) {
            return Err(GeometryError::NonPositiveSize { id, sizes });
        }
        let [a, b, c, d] = sizes;
        Ok(AnglePiece { id, a, b, c, d })
    }

    pub fn sizes(&self) -> [i32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn area(&self) -> i64 {
        decompose(self).rects.iter().map(SubRect::area).sum()
    }
}

impl fmt::Display for AnglePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.a, self.b, self.c, self.d)
    }
}

impl Instance {
    pub fn new(
        sizes: &[[i32; 4]],
        max_end_x: i32,
        max_end_y: i32,
        mode: Mode,
    ) -> Result<Self, GeometryError> {
        if sizes.is_empty() {
            return Err(GeometryError::NoPieces);
        }
        if max_end_x < 1 || max_end_y < 1 {
            return Err(GeometryError::BadCaps(max_end_x, max_end_y));
        }
        let pieces = sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| AnglePiece::new(i + 1, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Instance { pieces, max_end_x, max_end_y, mode })
    }

    pub fn total_area(&self) -> i64 {
        self.pieces.iter().map(AnglePiece::area).sum()
    }

    pub fn piece(&self, id: usize) -> Option<&AnglePiece> {
        id.checked_sub(1).and_then(|i| self.pieces.get(i)).filter(|p| p.id == id)
    }

    /// Instance made of the first `n` pieces, renumbered from 1.
    pub fn prefix(&self, n: usize) -> Instance {
        let pieces = self.pieces[..n.min(self.pieces.len())].to_vec();
        Instance { pieces, ..self.clone() }
    }
}

pub fn classify(piece: &AnglePiece) -> Pattern {
    use std::cmp::Ordering::*;
    match (piece.c.cmp(&piece.a), piece.b.cmp(&piece.d)) {
        (Equal, _) | (_, Equal) => Pattern::Rect,
        (Greater, Greater) => Pattern::NotchBL,
        (Greater, Less) => Pattern::NotchBR,
        (Less, Greater) => Pattern::NotchTL,
        (Less, Less) => Pattern::NotchTR,
    }
}

/// Identity orientation of a piece, split into one or two rectangles.
pub fn decompose(piece: &AnglePiece) -> OrientedPiece {
    let AnglePiece { a, b, c, d, .. } = *piece;
    let (w, h, rects) = match classify(piece) {
        // full-width bar on top, arm right-aligned below it
        Pattern::NotchBL => (c, b, vec![SubRect::new(0, b - d, c, d), SubRect::new(c - a, 0, a, b - d)]),
        // full-height column on the left, foot at the top right
        Pattern::NotchBR => (c, d, vec![SubRect::new(0, 0, a, d), SubRect::new(a, d - b, c - a, b)]),
        // full-height column on the right, foot at the bottom left
        Pattern::NotchTL => (a, b, vec![SubRect::new(a - c, 0, c, b), SubRect::new(0, 0, a - c, d)]),
        // full-width bar at the bottom, arm left-aligned above it
        Pattern::NotchTR => (a, d, vec![SubRect::new(0, 0, a, b), SubRect::new(0, b, c, d - b)]),
        Pattern::Rect => {
            let (w, h) = if a == c { (a, b.max(d)) } else { (a.max(c), b) };
            (w, h, vec![SubRect::new(0, 0, w, h)])
        }
    };
    OrientedPiece {
        piece_id: piece.id,
        orient: 0,
        transform: Transform::IDENTITY,
        w,
        h,
        rects,
        notch_w: (c - a).abs(),
        notch_h: (b - d).abs(),
    }
}

impl OrientedPiece {
    fn transformed(&self, t: Transform) -> OrientedPiece {
        let mut dims = (self.w, self.h);
        let rects = self
            .rects
            .iter()
            .map(|&r| {
                let (nr, nw, nh) = t.apply(r, self.w, self.h);
                dims = (nw, nh);
                nr
            })
            .collect();
        let swap = t.quarter_turns % 2 == 1;
        OrientedPiece {
            transform: t,
            w: dims.0,
            h: dims.1,
            rects,
            notch_w: if swap { self.notch_h } else { self.notch_w },
            notch_h: if swap { self.notch_w } else { self.notch_h },
            ..self.clone()
        }
    }

    pub fn area(&self) -> i64 {
        self.rects.iter().map(SubRect::area).sum()
    }

    /// Sub-rectangles in absolute coordinates for a given origin.
    pub fn placed_rects(&self, x: i32, y: i32) -> Vec<SubRect> {
        self.rects.iter().map(|r| r.translate(x, y)).collect()
    }
}

/// Distinct orientations of a piece. Fixed mode yields the identity only;
/// rotation mode tries every rotation (major) and mirror (minor) and keeps
/// the first of each group of coinciding cell sets.
pub fn orientations(piece: &AnglePiece, mode: Mode) -> Vec<OrientedPiece> {
    let base = decompose(piece);
    if mode == Mode::Fixed {
        return vec![base];
    }
    let mut seen: Vec<BTreeSet<(i32, i32)>> = Vec::new();
    let mut out = Vec::new();
    for code in 0..TRANSFORM_COUNT {
        let mut op = base.transformed(Transform::from_code(code));
        let shape = cells(&op, (0, 0));
        if seen.contains(&shape) {
            continue;
        }
        seen.push(shape);
        op.orient = out.len();
        out.push(op);
    }
    out
}

/// Occupied length per column (x profile) and per row (y profile).
pub fn profiles(op: &OrientedPiece) -> (StepProfile, StepProfile) {
    let mut cols = vec![0; op.w as usize];
    let mut rows = vec![0; op.h as usize];
    for r in &op.rects {
        for col in &mut cols[r.x as usize..(r.x + r.w) as usize] {
            *col += r.h;
        }
        for row in &mut rows[r.y as usize..(r.y + r.h) as usize] {
            *row += r.w;
        }
    }
    (StepProfile::from_columns(&cols), StepProfile::from_columns(&rows))
}

/// Unit cells `(col, row)` covered by the piece placed at `origin`.
pub fn cells(op: &OrientedPiece, origin: (i32, i32)) -> BTreeSet<(i32, i32)> {
    let mut out = BTreeSet::new();
    for r in op.placed_rects(origin.0, origin.1) {
        for col in r.x..r.x + r.w {
            for row in r.y..r.y + r.h {
                out.insert((col, row));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IllegalOrientation { piece: usize, orient: usize },
    OutOfBounds { piece: usize, cell: (i32, i32) },
    Overlap { cell: (i32, i32), pieces: (usize, usize) },
    ExtentTooSmall { axis: Axis, end: i32, required: i32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IllegalOrientation { piece, orient } => {
                write!(f, "piece {piece}: orientation {orient} not legal for this mode")
            }
            Violation::OutOfBounds { piece, cell } => {
                write!(f, "piece {piece}: cell ({}, {}) outside the enclosing box", cell.0, cell.1)
            }
            Violation::Overlap { cell, pieces } => write!(
                f,
                "pieces {} and {} share cell ({}, {})",
                pieces.0, pieces.1, cell.0, cell.1
            ),
            Violation::ExtentTooSmall { axis, end, required } => {
                write!(f, "end_{} = {end} but pieces reach {required}", if *axis == Axis::X { "x" } else { "y" })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a layout against an instance cell by cell.
pub fn validate_layout(instance: &Instance, layout: &Layout) -> Result<ValidationReport, GeometryError> {
    if layout.placements.len() != instance.pieces.len() {
        return Err(GeometryError::PlacementCount {
            expected: instance.pieces.len(),
            got: layout.placements.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for p in &layout.placements {
        if instance.piece(p.piece_id).is_none() {
            return Err(GeometryError::UnknownPiece(p.piece_id));
        }
        if !seen.insert(p.piece_id) {
            return Err(GeometryError::DuplicatePlacement(p.piece_id));
        }
        if p.orient >= TRANSFORM_COUNT {
            return Err(GeometryError::OrientationOutOfRange { piece: p.piece_id, orient: p.orient });
        }
        if p.x < 0 || p.y < 0 {
            return Err(GeometryError::NegativeOrigin { piece: p.piece_id, x: p.x, y: p.y });
        }
    }

    let mut report = ValidationReport::default();
    let mut owner: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let (mut reach_x, mut reach_y) = (0, 0);
    for p in &layout.placements {
        let piece = instance.piece(p.piece_id).expect("checked above");
        let Some(op) = orientations(piece, instance.mode).into_iter().nth(p.orient) else {
            report.violations.push(Violation::IllegalOrientation { piece: p.piece_id, orient: p.orient });
            continue;
        };
        reach_x = reach_x.max(p.x + op.w);
        reach_y = reach_y.max(p.y + op.h);
        let mut out_reported = false;
        for cell in cells(&op, (p.x, p.y)) {
            if !out_reported && (cell.0 >= layout.end_x || cell.1 >= layout.end_y) {
                report.violations.push(Violation::OutOfBounds { piece: p.piece_id, cell });
                out_reported = true;
            }
            if let Some(&other) = owner.get(&cell) {
                report.violations.push(Violation::Overlap { cell, pieces: (other, p.piece_id) });
            } else {
                owner.insert(cell, p.piece_id);
            }
        }
    }
    if layout.end_x < reach_x {
        report.violations.push(Violation::ExtentTooSmall { axis: Axis::X, end: layout.end_x, required: reach_x });
    }
    if layout.end_y < reach_y {
        report.violations.push(Violation::ExtentTooSmall { axis: Axis::Y, end: layout.end_y, required: reach_y });
    }
    Ok(report)
}
