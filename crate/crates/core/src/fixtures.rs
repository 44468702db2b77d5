//! Built-in example complexes.

use crate::complex::{BoundaryMode, PolyhedralComplex};
use crate::format::load_complex;

pub const FIGURE_EIGHT: &str = include_str!("../fixtures/figure_eight.vtc");
pub const WHITEHEAD: &str = include_str!("../fixtures/whitehead.vtc");
pub const CUBE: &str = include_str!("../fixtures/cube.vtc");
pub const TORUS_SQUARE: &str = include_str!("../fixtures/torus_square.vtc");
pub const DOUBLE_TETRAHEDRON: &str = include_str!("../fixtures/double_tetrahedron.vtc");
pub const DOUBLE_PYRAMID: &str = include_str!("../fixtures/double_pyramid.vtc");

fn load(text: &str, mode: BoundaryMode) -> PolyhedralComplex {
    load_complex(text, mode).expect("built-in fixture is valid")
}

/// Two ideal tetrahedra glued into the figure-eight knot complement.
pub fn figure_eight() -> PolyhedralComplex {
    load(FIGURE_EIGHT, BoundaryMode::Closed)
}

/// One regular ideal octahedron glued into the Whitehead link complement.
pub fn whitehead() -> PolyhedralComplex {
    load(WHITEHEAD, BoundaryMode::Closed)
}

/// `[0,1]^3` with no pairings (free boundary).
pub fn unit_cube() -> PolyhedralComplex {
    load(CUBE, BoundaryMode::FreeBoundary)
}

/// A square with opposite sides identified.
pub fn torus_square() -> PolyhedralComplex {
    load(TORUS_SQUARE, BoundaryMode::Closed)
}

/// Two copies of a tetrahedron (one ideal, three hyperideal vertices) glued
/// facet to facet by the identity.
pub fn double_tetrahedron() -> PolyhedralComplex {
    load(DOUBLE_TETRAHEDRON, BoundaryMode::Closed)
}

/// Two copies of a square pyramid with ideal apex and hyperideal base.
pub fn double_pyramid() -> PolyhedralComplex {
    load(DOUBLE_PYRAMID, BoundaryMode::Closed)
}
