//! The `vtc-1` complex file format.
//!
//! A `vtc-1` file is a JSON document:
//!
//! ```text
//! {
//!   "format": "vtc-1",
//!   "name": "optional free text",
//!   "polyhedra": [
//!     { "dim": 3,
//!       "vertices": [ { "label": "a", "tag": "ideal", "coords": ["1", "0", "-1/2"] }, ... ],
//!       "facets": [ [1, 2, 3], ... ],
//!       "provenance": { "polyhedron": 0, "vertices": [3, 0, 1, 2] } },
//!     ...
//!   ],
//!   "pairings": [ { "src": [0, 1], "dst": [1, 3], "map": [[0, 2], [2, 0], [3, 3]] }, ... ],
//!   "cover": { "degree": 6, "generators": ["(1 2 3)(4 5 6)", ...] },
//!   "certificate": { ... }
//! }
//! ```
//!
//! `coords` are optional but all-or-none per polyhedron; each coordinate is an
//! exact fraction string. `src`/`dst` are `[polyhedron, facet]` and `map` lists
//! `[source vertex, target vertex]`. Each facet pair is listed once.
//! `provenance`, `cover` and `certificate` only appear in triangulations
//! written by this crate. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{
    BoundaryMode, ComplexSpec, FacetRef, PairingSpec, PolyhedralComplex, PolyhedronSpec,
    ValidationReport, VertexTag,
};
use crate::geometry::RationalPoint;
use crate::pulling::Certificate;

pub const COMPLEX_FORMAT: &str = "vtc-1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format {found:?}, expected {expected:?}")]
    Version { found: String, expected: &'static str },
    #[error("polyhedron {polyhedron} vertex {vertex}: {detail}")]
    Coordinate {
        polyhedron: usize,
        vertex: usize,
        detail: String,
    },
    #[error("polyhedron {polyhedron}: coordinates given for some vertices but not all")]
    PartialCoordinates { polyhedron: usize },
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub polyhedra: Vec<PolyhedronEntry>,
    pub pairings: Vec<PairingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronEntry {
    pub dim: usize,
    pub vertices: Vec<VertexEntry>,
    pub facets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub label: String,
    pub tag: VertexTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub src: [usize; 2],
    pub dst: [usize; 2],
    pub map: Vec<[usize; 2]>,
}

/// Source cell of a simplex: polyhedron id and its local vertex ids, in the
/// simplex's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub polyhedron: usize,
    pub vertices: Vec<usize>,
}

/// Permutation representation defining the cover a triangulation lives on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverEntry {
    pub degree: usize,
    pub generators: Vec<String>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ComplexFile = serde_json::from_str(text)?;
        if file.format != COMPLEX_FORMAT {
            return Err(FormatError::Version {
                found: file.format,
                expected: COMPLEX_FORMAT,
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_spec(&self) -> Result<ComplexSpec, FormatError> {
        let mut polyhedra = Vec::with_capacity(self.polyhedra.len());
        for (i, p) in self.polyhedra.iter().enumerate() {
            let with = p.vertices.iter().filter(|v| v.coords.is_some()).count();
            let coords = if with == 0 {
                None
            } else if with < p.vertices.len() {
                return Err(FormatError::PartialCoordinates { polyhedron: i });
            } else {
                let mut pts = Vec::with_capacity(p.vertices.len());
                for (v, entry) in p.vertices.iter().enumerate() {
                    let raw = entry.coords.as_ref().expect("checked");
                    let pt = RationalPoint::parse(raw).map_err(|detail| FormatError::Coordinate {
                        polyhedron: i,
                        vertex: v,
                        detail,
                    })?;
                    pts.push(pt);
                }
                Some(pts)
            };
            polyhedra.push(PolyhedronSpec {
                dim: p.dim,
                labels: p.vertices.iter().map(|v| v.label.clone()).collect(),
                tags: p.vertices.iter().map(|v| v.tag).collect(),
                coords,
                facets: p.facets.clone(),
            });
        }
        let pairings = self
            .pairings
            .iter()
            .map(|e| PairingSpec {
                source: FacetRef {
                    polyhedron: e.src[0],
                    facet: e.src[1],
                },
                target: FacetRef {
                    polyhedron: e.dst[0],
                    facet: e.dst[1],
                },
                map: e.map.iter().map(|m| (m[0], m[1])).collect(),
            })
            .collect();
        Ok(ComplexSpec {
            polyhedra,
            pairings,
        })
    }

    pub fn from_spec(spec: &ComplexSpec) -> Self {
        let polyhedra = spec
            .polyhedra
            .iter()
            .map(|p| PolyhedronEntry {
                dim: p.dim,
                vertices: (0..p.tags.len())
                    .map(|v| VertexEntry {
                        label: p.labels.get(v).cloned().unwrap_or_else(|| v.to_string()),
                        tag: p.tags[v],
                        coords: p.coords.as_ref().map(|c| c[v].to_strings()),
                    })
                    .collect(),
                facets: p.facets.clone(),
                provenance: None,
            })
            .collect();
        let pairings = spec
            .pairings
            .iter()
            .map(|p| PairingEntry {
                src: [p.source.polyhedron, p.source.facet],
                dst: [p.target.polyhedron, p.target.facet],
                map: p.map.iter().map(|&(s, t)| [s, t]).collect(),
            })
            .collect();
        Self {
            format: COMPLEX_FORMAT.to_string(),
            name: None,
            polyhedra,
            pairings,
            cover: None,
            certificate: None,
        }
    }

    pub fn load(&self, mode: BoundaryMode) -> Result<PolyhedralComplex, LoadError> {
        let spec = self.to_spec()?;
        PolyhedralComplex::new(spec, mode).map_err(LoadError::Invalid)
    }
}

/// Parses and validates a `vtc-1` document.
pub fn load_complex(text: &str, mode: BoundaryMode) -> Result<PolyhedralComplex, LoadError> {
    ComplexFile::parse(text)?.load(mode)
}

pub fn write_complex(complex: &PolyhedralComplex) -> String {
    ComplexFile::from_spec(&complex.to_spec()).to_json()
}

/// SHA-256 of the complex's canonical serialization, hex encoded.
pub fn fingerprint(complex: &PolyhedralComplex) -> String {
    hex::encode(Sha256::digest(write_complex(complex).as_bytes()))
}
