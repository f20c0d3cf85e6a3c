//! Primal cell complexes, their circumcentric duals, and mesh generators.
//!
//! A [`CellComplex`] stores every k-cell for `k = 0..=n` as an ordered vertex
//! tuple together with its signed facets. Two cell shapes are supported:
//! simplices (vertex order is the orientation) and axis boxes (vertices in
//! binary corner order, bit `a` of the position selects the far side along
//! the cell's `a`-th axis).

mod complex;
mod dual;
pub mod generate;
mod geometry;
mod grid;
mod io;
mod quality;

pub use complex::{BoundaryComplex, Cell, CellComplex, CellShape};
pub use dual::{circumcentric_dual, DualComplex, DualWarning};
pub use geometry::{circumcenter, Point};
pub use grid::{build_rect_grid, build_rect_grid_from_coords, GridInfo};
pub use io::{load_mesh, write_mesh};
pub use quality::{quality, CellQuality, MeshQualityReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("non-manifold connectivity: {0}")]
    NonManifold(String),
    #[error("duplicate cell: {0}")]
    DuplicateCell(String),
    #[error("inconsistent orientation across {0}")]
    InconsistentOrientation(String),
    #[error("degenerate {dim}-cell {index}: {reason}")]
    Degenerate {
        dim: usize,
        index: usize,
        reason: String,
    },
    #[error("zero-volume {dim}-cell {index}")]
    ZeroVolume { dim: usize, index: usize },
}
