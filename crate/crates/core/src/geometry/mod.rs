//! Exact geometry in the projective ball model.
//!
//! Everything here works over `BigRational`; no predicate takes a tolerance.

mod fellow;
pub mod linalg;
mod point;
mod volume;

use thiserror::Error;

pub use fellow::{
    check_orthogonality, truncation_plane, validate_fellow, ConvexPolytope, ConvexityViolation,
    EuclideanFellow, FellowCondition, FellowReport, FellowViolation, Halfspace,
    OrthogonalityCheck, OrthogonalityReport, TruncationFace, TruncationOverlap, TruncationPlane,
};
pub use point::{format_fraction, parse_fraction, RationalPoint};
pub use volume::{realize_subdivision, signed_volume, GeometricSimplex, Realization};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("{points} points given for {vertices} vertices")]
    CoordinateCount { points: usize, vertices: usize },
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("coordinates do not match the face lattice: {0:?}")]
    NotConvex(Vec<ConvexityViolation>),
    #[error("not hyperideal: |v|^2 = {norm_sq} <= 1")]
    NotHyperideal { norm_sq: String },
    #[error("simplex {index} has {found} vertices, expected {expected}")]
    SimplexArity {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("simplex {index} uses unknown vertex {vertex}")]
    ForeignVertex { index: usize, vertex: usize },
    #[error("simplex {index} is degenerate")]
    DegenerateSimplex { index: usize },
    #[error("volume mismatch: polytope {expected}, simplices {found}")]
    VolumeMismatch { expected: String, found: String },
}
