//! JSON instance and layout files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{orientations, GeometryError, Instance, Layout, Mode, Placement, SubRect};
use crate::models::{Outcome, Status};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid layout file: {0}")]
    Layout(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub pieces: Vec<[i32; 4]>,
    pub max_end_x: i32,
    pub max_end_y: i32,
    pub mode: Mode,
}

impl From<&Instance> for InstanceFile {
    fn from(i: &Instance) -> Self {
        InstanceFile {
            pieces: i.pieces.iter().map(|p| p.sizes()).collect(),
            max_end_x: i.max_end_x,
            max_end_y: i.max_end_y,
            mode: i.mode,
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = GeometryError;

    fn try_from(f: InstanceFile) -> Result<Self, Self::Error> {
        Instance::new(&f.pieces, f.max_end_x, f.max_end_y, f.mode)
    }
}

pub fn parse_instance(json: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(json)?;
    Ok(Instance::try_from(file)?)
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(instance)).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectEntry {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl From<SubRect> for RectEntry {
    fn from(r: SubRect) -> Self {
        RectEntry { x: r.x, y: r.y, w: r.w, h: r.h }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementEntry {
    pub piece: usize,
    pub orientation: usize,
    pub x: i32,
    pub y: i32,
    /// Absolute coordinates.
    pub rects: Vec<RectEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsEntry {
    pub nodes: u64,
    pub fails: u64,
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub status: String,
    pub objective: Option<i64>,
    pub end_x: Option<i32>,
    pub end_y: Option<i32>,
    pub placements: Vec<PlacementEntry>,
    pub stats: StatsEntry,
}

impl LayoutFile {
    /// Serializable form of a layout; rectangles are resolved through the
    /// instance's orientation tables (an illegal orientation gets none).
    pub fn new(instance: &Instance, status: Status, layout: Option<&Layout>, stats: StatsEntry) -> Self {
        let placements = layout
            .map(|l| {
                l.placements
                    .iter()
                    .map(|p| {
                        let rects = instance
                            .piece(p.piece_id)
                            .and_then(|piece| orientations(piece, instance.mode).into_iter().nth(p.orient))
                            .map(|op| op.placed_rects(p.x, p.y).into_iter().map(RectEntry::from).collect())
                            .unwrap_or_default();
                        PlacementEntry { piece: p.piece_id, orientation: p.orient, x: p.x, y: p.y, rects }
                    })
                    .collect()
            })
            .unwrap_or_default();
        LayoutFile {
            status: status.to_string(),
            objective: layout.map(|l| i64::from(l.end_x) + i64::from(l.end_y)),
            end_x: layout.map(|l| l.end_x),
            end_y: layout.map(|l| l.end_y),
            placements,
            stats,
        }
    }

    pub fn from_outcome(instance: &Instance, outcome: &Outcome) -> Self {
        let stats = StatsEntry {
            nodes: outcome.stats.nodes,
            fails: outcome.stats.fails,
            ms: outcome.stats.elapsed.as_millis() as u64,
        };
        LayoutFile::new(instance, outcome.status, outcome.layout.as_ref(), stats)
    }

    pub fn status(&self) -> Result<Status, IoError> {
        self.status.parse().map_err(|_| IoError::Layout(format!("unknown status '{}'", self.status)))
    }

    /// The layout, if the file carries one.
    pub fn layout(&self) -> Result<Option<Layout>, IoError> {
        match (self.end_x, self.end_y) {
            (Some(end_x), Some(end_y)) => Ok(Some(Layout {
                placements: self
                    .placements
                    .iter()
                    .map(|p| Placement { piece_id: p.piece, orient: p.orientation, x: p.x, y: p.y })
                    .collect(),
                end_x,
                end_y,
            })),
            (None, None) if self.placements.is_empty() => Ok(None),
            _ => Err(IoError::Layout("placements given without end_x/end_y".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn parse_layout(json: &str) -> Result<LayoutFile, IoError> {
    Ok(serde_json::from_str(json)?)
}
