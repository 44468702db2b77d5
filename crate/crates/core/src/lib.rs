//! Finite covers and pulling triangulations of polyhedral face-pairing
//! complexes.
//!
//! A complex is a set of convex polytopes (combinatorial, optionally with
//! exact coordinates) whose facets are glued in pairs. [`diagonals`] finds
//! pairs of vertices of one polytope that the gluing identifies, [`covers`]
//! searches finite regular covers in which no such pair survives, and
//! [`pulling`] then cones each polytope to its ordered vertices, producing a
//! simplicial triangulation without new vertices. [`pipeline`] chains the
//! steps.

pub mod complex;
pub mod covers;
pub mod diagonals;
pub mod fixtures;
pub mod format;
pub mod geometry;
pub mod lattice;
pub mod pipeline;
pub mod presentation;
pub mod pulling;

pub use complex::{
    validate_complex, BoundaryMode, ComplexSpec, FacetRef, PolyhedralComplex, ValidationReport,
    VertexRef, VertexTag,
};
pub use format::{fingerprint, load_complex, write_complex, ComplexFile, LoadError};
pub use lattice::FaceLattice;
pub use presentation::{extract_presentation, GroupPresentation, Letter, Word};
