//! Packing of L-shaped pieces into the smallest enclosing box.
//!
//! The crate bundles a small finite-domain propagation engine
//! ([`engine`]), the global constraints the packing models need
//! ([`constraints`]), the models themselves ([`models`]), an exhaustive
//! cell-grid packer used as ground truth ([`oracle`]) and the file formats,
//! renderers and benchmark harness behind the command-line tool.

pub mod bench;
pub mod constraints;
pub mod data;
pub mod engine;
pub mod geometry;
pub mod io;
pub mod models;
pub mod oracle;
pub mod render;

pub use geometry::{AnglePiece, Instance, Layout, Mode, Placement};
pub use models::{solve, ModelConfig, Outcome, Status};
