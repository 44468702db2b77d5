//! The pulling construction: order the vertex classes, cone every polyhedron
//! to its vertices in that order, and glue the resulting simplices.
//!
//! Vertices where a codimension-2 face meets the sphere are not vertices of
//! the face lattice and play no part here.

mod cone;
mod ordering;
mod triangulation;

use thiserror::Error;

pub use cone::{cone_cells, pull_lattice, Cell, LocalSubdivision, Stage};
pub use ordering::{find_returning_pair, order_vertices, OrderSpec, VertexOrdering};
pub use triangulation::{
    cone_subdivide, subdivide_complex, verify_triangulation, Certificate, PolyhedronVolume,
    Simplex, SimplexPairing, Triangulation,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PullingError {
    #[error("returning diagonal: vertices {v} and {w} of polyhedron {polyhedron} are identified")]
    ReturningDiagonal { polyhedron: usize, v: usize, w: usize },
    #[error("bad ordering: {0}")]
    BadOrder(String),
    #[error("stage {step} audit failed: {detail}")]
    Audit { step: usize, detail: String },
    #[error("cell {vertices:?} is not a simplex after pulling")]
    NotSimplicial { vertices: Vec<usize> },
    #[error("facet subdivisions do not match across pairing {pairing}")]
    FacetMismatch { pairing: usize },
    #[error("triangulation failed verification: {}", .0.failures.join("; "))]
    Verification(Box<Certificate>),
    #[error("malformed triangulation: {0}")]
    Malformed(String),
}
