//! Polyhedral complexes with facet pairings and their quotient pseudo-manifold.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::geometry::RationalPoint;
use crate::lattice::{is_subset, sign, Face, FaceLattice, LatticeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexTag {
    Ideal,
    Hyperideal,
}

impl fmt::Display for VertexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexTag::Ideal => f.write_str("ideal"),
            VertexTag::Hyperideal => f.write_str("hyperideal"),
        }
    }
}

/// Whether every facet must be paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    Closed,
    /// Unpaired facets allowed. Only for exercising subdivision machinery;
    /// the pipeline refuses such complexes.
    FreeBoundary,
}

/// A vertex instance `(polyhedron, local vertex)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub polyhedron: usize,
    pub vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetRef {
    pub polyhedron: usize,
    pub facet: usize,
}

/// Unvalidated polyhedron data, as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedronSpec {
    pub dim: usize,
    pub labels: Vec<String>,
    pub tags: Vec<VertexTag>,
    pub coords: Option<Vec<RationalPoint>>,
    pub facets: Vec<Vec<usize>>,
}

/// Unvalidated pairing data. `map` lists `(source vertex, target vertex)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSpec {
    pub source: FacetRef,
    pub target: FacetRef,
    pub map: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexSpec {
    pub polyhedra: Vec<PolyhedronSpec>,
    pub pairings: Vec<PairingSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub lattice: FaceLattice,
    pub tags: Vec<VertexTag>,
    pub labels: Vec<String>,
    pub coords: Option<Vec<RationalPoint>>,
}

impl Polyhedron {
    pub fn num_vertices(&self) -> usize {
        self.lattice.num_vertices()
    }

    pub fn ideal_count(&self) -> usize {
        self.tags.iter().filter(|t| **t == VertexTag::Ideal).count()
    }
}

/// An identification of a source facet with a target facet.
///
/// Each unordered pair of facets is stored once; the opposite orientation is
/// available through [`FacetPairing::inverse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetPairing {
    pub source: FacetRef,
    pub target: FacetRef,
    /// Sorted by source vertex.
    pub vertex_map: Vec<(usize, usize)>,
}

impl FacetPairing {
    pub fn map(&self, v: usize) -> Option<usize> {
        self.vertex_map
            .binary_search_by_key(&v, |&(s, _)| s)
            .ok()
            .map(|i| self.vertex_map[i].1)
    }

    pub fn inverse(&self) -> FacetPairing {
        let mut vertex_map: Vec<(usize, usize)> =
            self.vertex_map.iter().map(|&(s, t)| (t, s)).collect();
        vertex_map.sort_unstable();
        FacetPairing {
            source: self.target,
            target: self.source,
            vertex_map,
        }
    }

    /// Image of a sorted vertex set, sorted.
    pub fn map_face(&self, face: &[usize]) -> Option<Face> {
        let mut out = face
            .iter()
            .map(|&v| self.map(v))
            .collect::<Option<Vec<_>>>()?;
        out.sort_unstable();
        Some(out)
    }
}

/// A pairing seen from one of its two facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub pairing: usize,
    /// `true` when leaving through the pairing's source facet.
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyComplex,
    MixedDimension { polyhedron: usize, dim: usize, expected: usize },
    Lattice { polyhedron: usize, error: LatticeError },
    TagCount { polyhedron: usize, tags: usize, vertices: usize },
    LabelCount { polyhedron: usize, labels: usize, vertices: usize },
    CoordinateCount { polyhedron: usize, points: usize, vertices: usize },
    CoordinateDimension { polyhedron: usize, vertex: usize, len: usize, dim: usize },
    DanglingPolyhedron { pairing: usize, polyhedron: usize },
    DanglingFacet { pairing: usize, polyhedron: usize, facet: usize },
    SelfPairedFacet { pairing: usize },
    FacetReused { facet: FacetRef, first: usize, second: usize },
    NonBijective { pairing: usize, detail: String },
    MapOutsideFacet { pairing: usize, vertex: usize, target_side: bool },
    NotLatticeIsomorphism { pairing: usize, face: Face },
    TagMismatch { pairing: usize, source_vertex: usize, target_vertex: usize },
    UnpairedFacet { facet: FacetRef },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyComplex => write!(f, "complex has no polyhedra"),
            MixedDimension { polyhedron, dim, expected } => {
                write!(f, "polyhedron {polyhedron}: dimension {dim}, expected {expected}")
            }
            Lattice { polyhedron, error } => write!(f, "polyhedron {polyhedron}: {error}"),
            TagCount { polyhedron, tags, vertices } => write!(
                f,
                "polyhedron {polyhedron}: {tags} vertex tags for {vertices} vertices"
            ),
            LabelCount { polyhedron, labels, vertices } => write!(
                f,
                "polyhedron {polyhedron}: {labels} labels for {vertices} vertices"
            ),
            CoordinateCount { polyhedron, points, vertices } => write!(
                f,
                "polyhedron {polyhedron}: coordinates for {points} of {vertices} vertices"
            ),
            CoordinateDimension { polyhedron, vertex, len, dim } => write!(
                f,
                "polyhedron {polyhedron} vertex {vertex}: {len} coordinates in dimension {dim}"
            ),
            DanglingPolyhedron { pairing, polyhedron } => {
                write!(f, "pairing {pairing}: no polyhedron {polyhedron}")
            }
            DanglingFacet { pairing, polyhedron, facet } => {
                write!(f, "pairing {pairing}: polyhedron {polyhedron} has no facet {facet}")
            }
            SelfPairedFacet { pairing } => write!(f, "pairing {pairing}: facet paired with itself"),
            FacetReused { facet, first, second } => write!(
                f,
                "facet {} of polyhedron {} appears in pairings {first} and {second}",
                facet.facet, facet.polyhedron
            ),
            NonBijective { pairing, detail } => {
                write!(f, "pairing {pairing}: non-bijective pairing ({detail})")
            }
            MapOutsideFacet { pairing, vertex, target_side } => write!(
                f,
                "pairing {pairing}: vertex {vertex} is not on the {} facet",
                if *target_side { "target" } else { "source" }
            ),
            NotLatticeIsomorphism { pairing, face } => write!(
                f,
                "pairing {pairing}: face {face:?} of the source facet does not map to a face"
            ),
            TagMismatch { pairing, source_vertex, target_vertex } => write!(
                f,
                "pairing {pairing}: vertex {source_vertex} and its image {target_vertex} carry different tags"
            ),
            UnpairedFacet { facet } => write!(
                f,
                "facet {} of polyhedron {} is not paired",
                facet.facet, facet.polyhedron
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: BoundaryMode,
    pub violations: Vec<Violation>,
    pub unpaired_facets: usize,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Clean, and every facet paired.
    pub fn is_closed(&self) -> bool {
        self.is_clean() && self.unpaired_facets == 0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            if self.unpaired_facets > 0 {
                write!(f, "clean (free boundary: {} unpaired facets)", self.unpaired_facets)
            } else {
                write!(f, "clean")
            }
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}

/// Checks every structural invariant of `spec` and lists all violations found.
pub fn validate_complex(spec: &ComplexSpec, mode: BoundaryMode) -> ValidationReport {
    validate_inner(spec, mode).0
}

fn validate_inner(
    spec: &ComplexSpec,
    mode: BoundaryMode,
) -> (ValidationReport, Vec<Option<FaceLattice>>) {
    let mut violations = Vec::new();
    if spec.polyhedra.is_empty() {
        violations.push(Violation::EmptyComplex);
    }
    let expected_dim = spec.polyhedra.first().map_or(0, |p| p.dim);
    let mut lattices: Vec<Option<FaceLattice>> = Vec::with_capacity(spec.polyhedra.len());
    for (i, p) in spec.polyhedra.iter().enumerate() {
        if p.dim != expected_dim {
            violations.push(Violation::MixedDimension {
                polyhedron: i,
                dim: p.dim,
                expected: expected_dim,
            });
        }
        let n = p.tags.len();
        if p.labels.len() != n {
            violations.push(Violation::LabelCount {
                polyhedron: i,
                labels: p.labels.len(),
                vertices: n,
            });
        }
        if let Some(coords) = &p.coords {
            if coords.len() != n {
                violations.push(Violation::CoordinateCount {
                    polyhedron: i,
                    points: coords.len(),
                    vertices: n,
                });
            }
            for (v, c) in coords.iter().enumerate() {
                if c.dim() != p.dim {
                    violations.push(Violation::CoordinateDimension {
                        polyhedron: i,
                        vertex: v,
                        len: c.dim(),
                        dim: p.dim,
                    });
                }
            }
        }
        match FaceLattice::from_facets(p.dim, n, &p.facets) {
            Ok(l) => lattices.push(Some(l)),
            Err(error) => {
                violations.push(Violation::Lattice { polyhedron: i, error });
                lattices.push(None);
            }
        }
    }

    let mut used: HashMap<FacetRef, usize> = HashMap::new();
    for (k, pr) in spec.pairings.iter().enumerate() {
        let mut ok = true;
        for side in [pr.source, pr.target] {
            match spec.polyhedra.get(side.polyhedron) {
                None => {
                    violations.push(Violation::DanglingPolyhedron {
                        pairing: k,
                        polyhedron: side.polyhedron,
                    });
                    ok = false;
                }
                Some(p) if side.facet >= p.facets.len() => {
                    violations.push(Violation::DanglingFacet {
                        pairing: k,
                        polyhedron: side.polyhedron,
                        facet: side.facet,
                    });
                    ok = false;
                }
                Some(_) => {}
            }
        }
        if pr.source == pr.target {
            violations.push(Violation::SelfPairedFacet { pairing: k });
            ok = false;
        }
        for side in [pr.source, pr.target] {
            if let Some(&first) = used.get(&side) {
                if first != k {
                    violations.push(Violation::FacetReused {
                        facet: side,
                        first,
                        second: k,
                    });
                }
            } else {
                used.insert(side, k);
            }
        }
        if !ok {
            continue;
        }
        check_pairing_map(k, pr, spec, &lattices, &mut violations);
    }

    let mut unpaired = 0;
    for (i, p) in spec.polyhedra.iter().enumerate() {
        for f in 0..p.facets.len() {
            let facet = FacetRef { polyhedron: i, facet: f };
            if !used.contains_key(&facet) {
                unpaired += 1;
                if mode == BoundaryMode::Closed {
                    violations.push(Violation::UnpairedFacet { facet });
                }
            }
        }
    }

    (
        ValidationReport {
            mode,
            violations,
            unpaired_facets: unpaired,
        },
        lattices,
    )
}

fn check_pairing_map(
    k: usize,
    pr: &PairingSpec,
    spec: &ComplexSpec,
    lattices: &[Option<FaceLattice>],
    violations: &mut Vec<Violation>,
) {
    let src_poly = &spec.polyhedra[pr.source.polyhedron];
    let dst_poly = &spec.polyhedra[pr.target.polyhedron];
    let mut src_facet = src_poly.facets[pr.source.facet].clone();
    let mut dst_facet = dst_poly.facets[pr.target.facet].clone();
    src_facet.sort_unstable();
    dst_facet.sort_unstable();

    let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
    let mut backward: BTreeMap<usize, usize> = BTreeMap::new();
    let before = violations.len();
    for &(s, t) in &pr.map {
        if src_facet.binary_search(&s).is_err() {
            violations.push(Violation::MapOutsideFacet {
                pairing: k,
                vertex: s,
                target_side: false,
            });
            continue;
        }
        if dst_facet.binary_search(&t).is_err() {
            violations.push(Violation::MapOutsideFacet {
                pairing: k,
                vertex: t,
                target_side: true,
            });
            continue;
        }
        if let Some(prev) = forward.insert(s, t) {
            violations.push(Violation::NonBijective {
                pairing: k,
                detail: format!("source vertex {s} mapped to both {prev} and {t}"),
            });
        }
        if let Some(prev) = backward.insert(t, s) {
            violations.push(Violation::NonBijective {
                pairing: k,
                detail: format!("target vertex {t} is the image of both {prev} and {s}"),
            });
        }
    }
    if violations.len() > before {
        return;
    }
    if forward.len() != src_facet.len() || backward.len() != dst_facet.len() {
        violations.push(Violation::NonBijective {
            pairing: k,
            detail: format!(
                "{} of {} source vertices mapped onto {} of {} target vertices",
                forward.len(),
                src_facet.len(),
                backward.len(),
                dst_facet.len()
            ),
        });
        return;
    }
    for (&s, &t) in &forward {
        if src_poly.tags.get(s) != dst_poly.tags.get(t) {
            violations.push(Violation::TagMismatch {
                pairing: k,
                source_vertex: s,
                target_vertex: t,
            });
        }
    }
    let (Some(src_l), Some(dst_l)) = (
        &lattices[pr.source.polyhedron],
        &lattices[pr.target.polyhedron],
    ) else {
        return;
    };
    // Every face of the source facet must land on a face of the same rank.
    for rank in 0..src_l.dim() {
        for face in src_l.faces(rank).iter().filter(|g| is_subset(g, &src_facet)) {
            let mut image: Vec<usize> = face.iter().map(|v| forward[v]).collect();
            image.sort_unstable();
            if dst_l.face_index(rank, &image).is_none() {
                violations.push(Violation::NotLatticeIsomorphism {
                    pairing: k,
                    face: face.clone(),
                });
                return;
            }
        }
    }
}

/// Partition of face instances of one rank into classes.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Classes {
    offsets: Vec<usize>,
    class_of: Vec<usize>,
    count: usize,
}

impl Classes {
    fn build(sizes: &[usize], unions: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut total = 0;
        for &s in sizes {
            offsets.push(total);
            total += s;
        }
        offsets.push(total);
        let mut uf = UnionFind::<usize>::new(total);
        for (a, b) in unions {
            uf.union(a, b);
        }
        let mut class_of = vec![usize::MAX; total];
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        for (i, slot) in class_of.iter_mut().enumerate() {
            let r = uf.find(i);
            let next = root_class.len();
            *slot = *root_class.entry(r).or_insert(next);
        }
        Self {
            offsets,
            class_of,
            count: root_class.len(),
        }
    }

    fn get(&self, poly: usize, local: usize) -> usize {
        self.class_of[self.offsets[poly] + local]
    }
}

/// A validated complex `(C, Φ)` with cached quotient data.
#[derive(Clone, Debug)]
pub struct PolyhedralComplex {
    dim: usize,
    mode: BoundaryMode,
    polyhedra: Vec<Polyhedron>,
    pairings: Vec<FacetPairing>,
    /// `partner[p][f]`: pairing through facet `f` of polyhedron `p`.
    partner: Vec<Vec<Option<Crossing>>>,
    face_classes: Vec<Classes>,
}

impl PolyhedralComplex {
    /// Validates `spec` and caches the derived quotient data.
    pub fn new(spec: ComplexSpec, mode: BoundaryMode) -> Result<Self, ValidationReport> {
        let (report, lattices) = validate_inner(&spec, mode);
        if !report.is_clean() {
            return Err(report);
        }
        let dim = spec.polyhedra[0].dim;
        let polyhedra: Vec<Polyhedron> = spec
            .polyhedra
            .into_iter()
            .zip(lattices)
            .map(|(p, l)| Polyhedron {
                lattice: l.expect("validated"),
                tags: p.tags,
                labels: p.labels,
                coords: p.coords,
            })
            .collect();
        let pairings: Vec<FacetPairing> = spec
            .pairings
            .into_iter()
            .map(|p| {
                let mut vertex_map = p.map;
                vertex_map.sort_unstable();
                FacetPairing {
                    source: p.source,
                    target: p.target,
                    vertex_map,
                }
            })
            .collect();
        let mut partner: Vec<Vec<Option<Crossing>>> = polyhedra
            .iter()
            .map(|p| vec![None; p.lattice.facets().len()])
            .collect();
        for (k, pr) in pairings.iter().enumerate() {
            partner[pr.source.polyhedron][pr.source.facet] = Some(Crossing {
                pairing: k,
                forward: true,
            });
            partner[pr.target.polyhedron][pr.target.facet] = Some(Crossing {
                pairing: k,
                forward: false,
            });
        }

        let mut face_classes = Vec::with_capacity(dim + 1);
        for rank in 0..=dim {
            let sizes: Vec<usize> = polyhedra.iter().map(|p| p.lattice.face_count(rank)).collect();
            let mut unions = Vec::new();
            if rank < dim {
                let mut offsets = vec![0];
                for s in &sizes {
                    offsets.push(offsets.last().unwrap() + s);
                }
                for pr in &pairings {
                    let sp = &polyhedra[pr.source.polyhedron].lattice;
                    let tp = &polyhedra[pr.target.polyhedron].lattice;
                    let facet = &sp.facets()[pr.source.facet];
                    for (i, g) in sp.faces(rank).iter().enumerate() {
                        if !is_subset(g, facet) {
                            continue;
                        }
                        let image = pr.map_face(g).expect("validated map");
                        let j = tp.face_index(rank, &image).expect("validated isomorphism");
                        unions.push((
                            offsets[pr.source.polyhedron] + i,
                            offsets[pr.target.polyhedron] + j,
                        ));
                    }
                }
            }
            face_classes.push(Classes::build(&sizes, unions.into_iter()));
        }

        Ok(Self {
            dim,
            mode,
            polyhedra,
            pairings,
            partner,
            face_classes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn is_closed(&self) -> bool {
        self.partner.iter().flatten().all(Option::is_some)
    }

    pub fn polyhedra(&self) -> &[Polyhedron] {
        &self.polyhedra
    }

    pub fn polyhedron(&self, p: usize) -> &Polyhedron {
        &self.polyhedra[p]
    }

    pub fn pairings(&self) -> &[FacetPairing] {
        &self.pairings
    }

    /// The pairing through a facet, oriented to leave through that facet.
    pub fn crossing(&self, facet: FacetRef) -> Option<(Crossing, FacetPairing)> {
        let c = self.partner[facet.polyhedron][facet.facet]?;
        let pr = &self.pairings[c.pairing];
        Some((c, if c.forward { pr.clone() } else { pr.inverse() }))
    }

    pub fn crossing_of(&self, facet: FacetRef) -> Option<Crossing> {
        self.partner[facet.polyhedron][facet.facet]
    }

    pub fn vertex_class(&self, v: VertexRef) -> usize {
        self.face_classes[0].get(v.polyhedron, self.lattice_vertex_index(v))
    }

    fn lattice_vertex_index(&self, v: VertexRef) -> usize {
        // rank-0 faces are sorted singletons, so face index == vertex id
        v.vertex
    }

    pub fn num_vertex_classes(&self) -> usize {
        self.face_classes[0].count
    }

    /// Vertex classes, numbered by smallest member in `(polyhedron, vertex)` order.
    pub fn vertex_partition(&self) -> Vec<Vec<VertexRef>> {
        let mut out = vec![Vec::new(); self.num_vertex_classes()];
        for (p, poly) in self.polyhedra.iter().enumerate() {
            for v in 0..poly.num_vertices() {
                let r = VertexRef { polyhedron: p, vertex: v };
                out[self.vertex_class(r)].push(r);
            }
        }
        out
    }

    /// Tag shared by all members of a vertex class.
    pub fn class_tag(&self, class: usize) -> VertexTag {
        let r = self.vertex_partition()[class][0];
        self.polyhedra[r.polyhedron].tags[r.vertex]
    }

    pub fn face_class(&self, polyhedron: usize, rank: usize, face: usize) -> usize {
        self.face_classes[rank].get(polyhedron, face)
    }

    pub fn num_face_classes(&self, rank: usize) -> usize {
        self.face_classes[rank].count
    }

    pub fn total_vertices(&self) -> usize {
        self.polyhedra.iter().map(Polyhedron::num_vertices).sum()
    }

    /// `Σ_k (-1)^k` (number of rank-`k` face classes) of the quotient `M̂`.
    pub fn pseudo_manifold_euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| sign(k) * self.face_classes[k].count as i64)
            .sum()
    }

    /// Euler characteristics of the vertex links, indexed by vertex class.
    pub fn link_euler_characteristics(&self) -> Vec<i64> {
        // A flag (face G of rank k >= 1, vertex v of G) is a (k-1)-cell of the link of v.
        let mut chi = vec![0i64; self.num_vertex_classes()];
        for rank in 1..=self.dim {
            let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
            let mut flags: Vec<VertexRef> = Vec::new();
            for (p, poly) in self.polyhedra.iter().enumerate() {
                for (g, face) in poly.lattice.faces(rank).iter().enumerate() {
                    for &v in face {
                        ids.insert((p, g, v), flags.len());
                        flags.push(VertexRef { polyhedron: p, vertex: v });
                    }
                }
            }
            let mut uf = UnionFind::<usize>::new(flags.len());
            if rank < self.dim {
                for pr in &self.pairings {
                    let sp = &self.polyhedra[pr.source.polyhedron].lattice;
                    let tp = &self.polyhedra[pr.target.polyhedron].lattice;
                    let facet = &sp.facets()[pr.source.facet];
                    for (g, face) in sp.faces(rank).iter().enumerate() {
                        if !is_subset(face, facet) {
                            continue;
                        }
                        let image = pr.map_face(face).expect("validated");
                        let h = tp.face_index(rank, &image).expect("validated");
                        for &v in face {
                            let a = ids[&(pr.source.polyhedron, g, v)];
                            let b = ids[&(pr.target.polyhedron, h, pr.map(v).unwrap())];
                            uf.union(a, b);
                        }
                    }
                }
            }
            let mut seen = vec![false; flags.len()];
            for i in 0..flags.len() {
                let r = uf.find(i);
                if !seen[r] {
                    seen[r] = true;
                    chi[self.vertex_class(flags[i])] += sign(rank - 1);
                }
            }
        }
        chi
    }

    /// Euler characteristic of the compact space obtained from `M̂` by
    /// replacing every vertex with its link (deleting open vertex stars).
    /// This is multiplicative under finite covers.
    pub fn euler_characteristic(&self) -> i64 {
        let links: i64 = self.link_euler_characteristics().iter().sum();
        self.pseudo_manifold_euler_characteristic() - self.num_vertex_classes() as i64 + links
    }

    /// Back to unvalidated data (for serialization and cover construction).
    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            polyhedra: self
                .polyhedra
                .iter()
                .map(|p| PolyhedronSpec {
                    dim: self.dim,
                    labels: p.labels.clone(),
                    tags: p.tags.clone(),
                    coords: p.coords.clone(),
                    facets: p.lattice.facets().to_vec(),
                })
                .collect(),
            pairings: self
                .pairings
                .iter()
                .map(|p| PairingSpec {
                    source: p.source,
                    target: p.target,
                    map: p.vertex_map.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cube_free_boundary() {
        let c = fixtures::unit_cube();
        assert_eq!(c.num_vertex_classes(), 8);
        assert_eq!(c.pseudo_manifold_euler_characteristic(), 1);
        assert_eq!(c.euler_characteristic(), 1);
        assert!(!c.is_closed());
    }

    #[test]
    fn cube_rejected_when_closed_required() {
        let spec = fixtures::unit_cube().to_spec();
        let report = validate_complex(&spec, BoundaryMode::Closed);
        assert_eq!(report.violations.len(), 6);
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::UnpairedFacet { .. })));
        let free = validate_complex(&spec, BoundaryMode::FreeBoundary);
        assert!(free.is_clean());
        assert_eq!(free.unpaired_facets, 6);
    }

    #[test]
    fn figure_eight_quotient() {
        let c = fixtures::figure_eight();
        assert!(c.is_closed());
        assert_eq!(c.num_vertex_classes(), 1);
        assert_eq!(c.num_face_classes(1), 2);
        assert_eq!(c.num_face_classes(2), 4);
        assert_eq!(c.pseudo_manifold_euler_characteristic(), 1);
        assert_eq!(c.link_euler_characteristics(), vec![0]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn whitehead_quotient() {
        let c = fixtures::whitehead();
        let sizes: Vec<usize> = c.vertex_partition().iter().map(Vec::len).collect();
        // class 0 contains vertex 0 (+x)
        assert_eq!(sizes, vec![2, 4]);
        assert_eq!(c.num_face_classes(1), 3);
        assert_eq!(c.link_euler_characteristics(), vec![0, 0]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn torus_square() {
        let c = fixtures::torus_square();
        assert_eq!(c.num_vertex_classes(), 1);
        assert_eq!(c.pseudo_manifold_euler_characteristic(), 0);
        assert_eq!(c.euler_characteristic(), -1);
    }

    #[test]
    fn non_bijective_pairing_reported() {
        let mut spec = fixtures::figure_eight().to_spec();
        // two source vertices onto target vertex 2
        let map = &mut spec.pairings[0].map;
        let t = map[0].1;
        map[1].1 = t;
        let report = validate_complex(&spec, BoundaryMode::Closed);
        assert!(!report.is_clean());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonBijective { pairing: 0, .. })));
        assert!(report.to_string().contains("non-bijective pairing"));
    }

    #[test]
    fn dangling_ids_reported() {
        let mut spec = fixtures::figure_eight().to_spec();
        spec.pairings[1].target.polyhedron = 7;
        spec.pairings[2].source.facet = 9;
        let report = validate_complex(&spec, BoundaryMode::Closed);
        assert!(report
            .violations
            .contains(&Violation::DanglingPolyhedron { pairing: 1, polyhedron: 7 }));
        assert!(report.violations.contains(&Violation::DanglingFacet {
            pairing: 2,
            polyhedron: 0,
            facet: 9
        }));
    }

    #[test]
    fn tag_mismatch_and_reuse() {
        let mut spec = fixtures::figure_eight().to_spec();
        spec.polyhedra[1].tags[0] = VertexTag::Hyperideal;
        let dup = spec.pairings[0].clone();
        spec.pairings.push(dup);
        let report = validate_complex(&spec, BoundaryMode::Closed);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TagMismatch { .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FacetReused { second: 4, .. })));
    }

    #[test]
    fn square_pairing_must_respect_edges() {
        let mut spec = fixtures::unit_cube().to_spec();
        let src = spec.polyhedra[0].facets[0].clone(); // [0, 2, 4, 6]
        let dst = spec.polyhedra[0].facets[1].clone(); // [1, 3, 5, 7]
        // translation x -> x + 1
        spec.pairings.push(PairingSpec {
            source: FacetRef { polyhedron: 0, facet: 0 },
            target: FacetRef { polyhedron: 0, facet: 1 },
            map: (0..4).map(|i| (src[i], dst[i])).collect(),
        });
        let ok = validate_complex(&spec, BoundaryMode::FreeBoundary);
        assert!(ok.is_clean(), "{ok}");
        spec.pairings[0].map = vec![(src[0], dst[0]), (src[1], dst[1]), (src[2], dst[3]), (src[3], dst[2])];
        // edge {0,4} goes to the diagonal {1,7}
        let bad = validate_complex(&spec, BoundaryMode::FreeBoundary);
        assert!(bad
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotLatticeIsomorphism { .. })), "{bad}");
    }
}
