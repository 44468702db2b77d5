use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::cone::{pull_lattice, LocalSubdivision};
use super::{PullingError, VertexOrdering};
use crate::complex::{FacetRef, PolyhedralComplex, VertexRef};
use crate::format::{ComplexFile, CoverEntry, PairingEntry, PolyhedronEntry, Provenance, VertexEntry, COMPLEX_FORMAT};
use crate::geometry::{format_fraction, realize_subdivision, ConvexPolytope};
use crate::lattice::{is_subset, sign, Face};

/// A simplex of the output: source polyhedron, local vertex ids and their
/// vertex classes, listed in pulling order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub polyhedron: usize,
    pub vertices: Vec<usize>,
    pub classes: Vec<usize>,
}

impl Simplex {
    /// Facet `i` omits vertex `i`.
    pub fn facet(&self, i: usize) -> Vec<usize> {
        let mut f: Vec<usize> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v)
            .collect();
        f.sort_unstable();
        f
    }
}

/// A gluing of facet `source.1` of simplex `source.0` to facet `target.1` of
/// simplex `target.0`. `map` sends vertex positions of the source simplex to
/// vertex positions of the target simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexPairing {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub map: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronVolume {
    pub polyhedron: usize,
    pub volume: String,
    pub simplices_total: String,
    pub signed: Vec<String>,
}

/// Machine-readable verification result.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub simplices: usize,
    pub pairings: usize,
    pub internal_pairings: usize,
    pub external_pairings: usize,
    pub unpaired_facets: usize,
    pub all_cells_simplices: bool,
    pub distinct_vertex_classes: bool,
    pub pairings_simplicial: bool,
    pub tiling: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volumes: Option<Vec<PolyhedronVolume>>,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub dim: usize,
    pub simplices: Vec<Simplex>,
    pub pairings: Vec<SimplexPairing>,
    pub certificate: Certificate,
}

fn classes_of(complex: &PolyhedralComplex, p: usize) -> Vec<usize> {
    (0..complex.polyhedron(p).num_vertices())
        .map(|v| complex.vertex_class(VertexRef { polyhedron: p, vertex: v }))
        .collect()
}

/// Pulls one polyhedron of `complex` in the order induced by `ordering`.
pub fn cone_subdivide(
    complex: &PolyhedralComplex,
    polyhedron: usize,
    ordering: &VertexOrdering,
) -> Result<LocalSubdivision, PullingError> {
    let classes = classes_of(complex, polyhedron);
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (v, &c) in classes.iter().enumerate() {
        if let Some(&u) = seen.get(&c) {
            return Err(PullingError::ReturningDiagonal {
                polyhedron,
                v: u,
                w: v,
            });
        }
        seen.insert(c, v);
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&v| ordering.rank(classes[v]));
    pull_lattice(&complex.polyhedron(polyhedron).lattice, &order)
}

/// Pulls every polyhedron and glues the simplices along facet pairings.
pub fn subdivide_complex(
    complex: &PolyhedralComplex,
    ordering: &VertexOrdering,
) -> Result<Triangulation, PullingError> {
    if ordering.len() != complex.num_vertex_classes() {
        return Err(PullingError::BadOrder(format!(
            "ordering has {} classes, complex has {}",
            ordering.len(),
            complex.num_vertex_classes()
        )));
    }
    let dim = complex.dim();
    let mut simplices = Vec::new();
    let mut by_polyhedron: Vec<Vec<usize>> = Vec::new();
    for p in 0..complex.polyhedra().len() {
        let local = cone_subdivide(complex, p, ordering)?;
        let classes = classes_of(complex, p);
        let mut ids = Vec::new();
        for s in local.simplices {
            ids.push(simplices.len());
            simplices.push(Simplex {
                polyhedron: p,
                classes: s.iter().map(|&v| classes[v]).collect(),
                vertices: s,
            });
        }
        by_polyhedron.push(ids);
    }

    // (polyhedron, sorted local facet vertices) -> (simplex, facet position)
    let mut facet_index: HashMap<(usize, Face), Vec<(usize, usize)>> = HashMap::new();
    for (s, simplex) in simplices.iter().enumerate() {
        for i in 0..=dim {
            facet_index
                .entry((simplex.polyhedron, simplex.facet(i)))
                .or_default()
                .push((s, i));
        }
    }

    let mut pairings = Vec::new();
    for (s, simplex) in simplices.iter().enumerate() {
        let p = simplex.polyhedron;
        let lattice = &complex.polyhedron(p).lattice;
        for i in 0..=dim {
            let face = simplex.facet(i);
            let users = &facet_index[&(p, face.clone())];
            if users.len() == 2 {
                let other = if users[0] == (s, i) { users[1] } else { users[0] };
                if (s, i) < other {
                    pairings.push(position_pairing(&simplices, (s, i), other, Some));
                }
                continue;
            }
            let Some(f) = lattice.facets().iter().position(|pf| is_subset(&face, pf)) else {
                return Err(PullingError::Audit {
                    step: 0,
                    detail: format!("facet {face:?} of simplex {s} is interior but unmatched"),
                });
            };
            let Some((crossing, phi)) = complex.crossing(FacetRef { polyhedron: p, facet: f }) else {
                continue;
            };
            if !crossing.forward {
                continue;
            }
            let image = phi.map_face(&face).expect("face inside the paired facet");
            let q = phi.target.polyhedron;
            let target = match facet_index.get(&(q, image)) {
                Some(u) if u.len() == 1 => u[0],
                _ => {
                    return Err(PullingError::FacetMismatch {
                        pairing: crossing.pairing,
                    })
                }
            };
            pairings.push(position_pairing(&simplices, (s, i), target, |v| phi.map(v)));
        }
    }

    let mut t = Triangulation {
        dim,
        simplices,
        pairings,
        certificate: Certificate::default(),
    };
    let cert = verify_triangulation(&t, complex);
    if !cert.passed {
        return Err(PullingError::Verification(Box::new(cert)));
    }
    t.certificate = cert;
    Ok(t)
}

fn position_pairing(
    simplices: &[Simplex],
    source: (usize, usize),
    target: (usize, usize),
    phi: impl Fn(usize) -> Option<usize>,
) -> SimplexPairing {
    let s = &simplices[source.0];
    let t = &simplices[target.0];
    let map = s
        .vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != source.1)
        .map(|(i, &v)| {
            let w = phi(v).expect("vertex on the paired facet");
            (i, t.vertices.iter().position(|&x| x == w).expect("image in target"))
        })
        .collect();
    SimplexPairing {
        source,
        target,
        map,
    }
}

/// Re-derives every claim about `t` from scratch: simplex vertex classes,
/// simpliciality of every pairing, the tiling of each polyhedron, and exact
/// volumes when coordinates are present.
pub fn verify_triangulation(t: &Triangulation, complex: &PolyhedralComplex) -> Certificate {
    let mut c = Certificate {
        simplices: t.simplices.len(),
        pairings: t.pairings.len(),
        all_cells_simplices: true,
        distinct_vertex_classes: true,
        pairings_simplicial: true,
        tiling: true,
        ..Certificate::default()
    };
    let dim = complex.dim();
    if t.dim != dim {
        c.failures.push(format!("dimension {} != complex dimension {dim}", t.dim));
        c.all_cells_simplices = false;
    }
    let npoly = complex.polyhedra().len();
    let mut valid = vec![true; t.simplices.len()];
    for (s, simplex) in t.simplices.iter().enumerate() {
        if simplex.polyhedron >= npoly {
            c.failures.push(format!("simplex {s}: no polyhedron {}", simplex.polyhedron));
            c.all_cells_simplices = false;
            valid[s] = false;
            continue;
        }
        let nv = complex.polyhedron(simplex.polyhedron).num_vertices();
        if simplex.vertices.len() != dim + 1 || simplex.classes.len() != dim + 1 {
            c.failures.push(format!("simplex {s}: {} vertices", simplex.vertices.len()));
            c.all_cells_simplices = false;
            valid[s] = false;
            continue;
        }
        if simplex.vertices.iter().any(|&v| v >= nv) {
            c.failures.push(format!("simplex {s}: vertex out of range"));
            c.all_cells_simplices = false;
            valid[s] = false;
            continue;
        }
        for (k, &v) in simplex.vertices.iter().enumerate() {
            let class = complex.vertex_class(VertexRef {
                polyhedron: simplex.polyhedron,
                vertex: v,
            });
            if class != simplex.classes[k] {
                c.failures.push(format!(
                    "simplex {s}: vertex {v} has class {class}, recorded {}",
                    simplex.classes[k]
                ));
                c.distinct_vertex_classes = false;
            }
        }
        let distinct: HashSet<usize> = simplex.classes.iter().copied().collect();
        let locals: HashSet<usize> = simplex.vertices.iter().copied().collect();
        if distinct.len() != dim + 1 || locals.len() != dim + 1 {
            c.failures.push(format!("simplex {s}: repeated vertex class"));
            c.distinct_vertex_classes = false;
        }
    }

    // pairings
    let mut used: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, pr) in t.pairings.iter().enumerate() {
        for side in [pr.source, pr.target] {
            *used.entry(side).or_default() += 1;
        }
        match check_pairing(t, complex, pr, &valid) {
            Ok(true) => c.internal_pairings += 1,
            Ok(false) => c.external_pairings += 1,
            Err(e) => {
                c.failures.push(format!("pairing {k}: {e}"));
                c.pairings_simplicial = false;
            }
        }
    }
    for (side, n) in &used {
        if *n > 1 {
            c.failures.push(format!(
                "facet {} of simplex {} is used by {n} pairings",
                side.1, side.0
            ));
            c.pairings_simplicial = false;
        }
    }
    for (s, simplex) in t.simplices.iter().enumerate() {
        if !valid[s] {
            continue;
        }
        for i in 0..=dim {
            if used.contains_key(&(s, i)) {
                continue;
            }
            let face = simplex.facet(i);
            let lattice = &complex.polyhedron(simplex.polyhedron).lattice;
            let free = lattice.facets().iter().enumerate().any(|(f, pf)| {
                is_subset(&face, pf)
                    && complex
                        .crossing_of(FacetRef {
                            polyhedron: simplex.polyhedron,
                            facet: f,
                        })
                        .is_none()
            });
            if free {
                c.unpaired_facets += 1;
            } else {
                c.failures.push(format!("facet {i} of simplex {s} is not paired"));
                c.pairings_simplicial = false;
            }
        }
    }

    // tiling per polyhedron
    let mut groups: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for (s, simplex) in t.simplices.iter().enumerate() {
        if valid[s] {
            groups.entry(simplex.polyhedron).or_default().push(simplex.vertices.clone());
        }
    }
    let mut volumes = Vec::new();
    for p in 0..npoly {
        let cells = groups.remove(&p).unwrap_or_default();
        if let Err(e) = tiling_audit(complex, p, &cells) {
            c.failures.push(format!("polyhedron {p}: {e}"));
            c.tiling = false;
        }
        let poly = complex.polyhedron(p);
        if let Some(coords) = &poly.coords {
            match ConvexPolytope::new(poly.lattice.clone(), coords.clone()) {
                Ok(polytope) => match realize_subdivision(&polytope, &cells) {
                    Ok(r) => volumes.push(PolyhedronVolume {
                        polyhedron: p,
                        volume: format_fraction(&r.polytope_volume),
                        simplices_total: format_fraction(&r.total_volume),
                        signed: r.simplices.iter().map(|s| format_fraction(&s.signed_volume)).collect(),
                    }),
                    Err(e) => {
                        c.failures.push(format!("polyhedron {p}: {e}"));
                        c.tiling = false;
                    }
                },
                Err(e) => c.failures.push(format!("polyhedron {p}: coordinates unusable: {e}")),
            }
        }
    }
    if !volumes.is_empty() {
        c.volumes = Some(volumes);
    }
    c.passed = c.failures.is_empty();
    c
}

/// `Ok(true)` for a pairing inside one polyhedron, `Ok(false)` for one along
/// a facet pairing of the complex.
fn check_pairing(
    t: &Triangulation,
    complex: &PolyhedralComplex,
    pr: &SimplexPairing,
    valid: &[bool],
) -> Result<bool, String> {
    let n = t.dim;
    let (s, i) = pr.source;
    let (u, j) = pr.target;
    if s >= t.simplices.len() || u >= t.simplices.len() || i > n || j > n {
        return Err("refers to a missing simplex or facet".into());
    }
    if !valid[s] || !valid[u] {
        return Err("refers to an invalid simplex".into());
    }
    if (s, i) == (u, j) {
        return Err("glues a facet to itself".into());
    }
    let a = &t.simplices[s];
    let b = &t.simplices[u];
    let mut src: Vec<usize> = pr.map.iter().map(|m| m.0).collect();
    let mut dst: Vec<usize> = pr.map.iter().map(|m| m.1).collect();
    src.sort_unstable();
    dst.sort_unstable();
    let expect = |skip: usize| -> Vec<usize> { (0..=n).filter(|&k| k != skip).collect() };
    if src != expect(i) || dst != expect(j) {
        return Err("map is not a bijection between the two facets".into());
    }
    for &(x, y) in &pr.map {
        if a.classes[x] != b.classes[y] {
            return Err(format!(
                "maps class {} to class {}",
                a.classes[x], b.classes[y]
            ));
        }
    }
    let pairs: Vec<(usize, usize)> = pr
        .map
        .iter()
        .map(|&(x, y)| (a.vertices[x], b.vertices[y]))
        .collect();
    if a.polyhedron == b.polyhedron && pairs.iter().all(|(x, y)| x == y) {
        let p = a.polyhedron;
        let face = a.facet(i);
        let boundary = complex.polyhedron(p).lattice.facets().iter().any(|pf| is_subset(&face, pf));
        if boundary {
            return Err("glues two facets on the polyhedron boundary by the identity".into());
        }
        return Ok(true);
    }
    let lattice = &complex.polyhedron(a.polyhedron).lattice;
    let face = a.facet(i);
    for (f, pf) in lattice.facets().iter().enumerate() {
        if !is_subset(&face, pf) {
            continue;
        }
        let Some((_, phi)) = complex.crossing(FacetRef {
            polyhedron: a.polyhedron,
            facet: f,
        }) else {
            continue;
        };
        if phi.target.polyhedron == b.polyhedron && pairs.iter().all(|&(x, y)| phi.map(x) == Some(y)) {
            return Ok(false);
        }
    }
    Err("is neither internal nor induced by a facet pairing".into())
}

fn tiling_audit(complex: &PolyhedralComplex, p: usize, cells: &[Vec<usize>]) -> Result<(), String> {
    let lattice = &complex.polyhedron(p).lattice;
    let dim = lattice.dim();
    if cells.is_empty() {
        return Err("no simplices".into());
    }
    let mut sets: HashSet<Face> = HashSet::new();
    let mut distinct: Vec<HashSet<Face>> = vec![HashSet::new(); dim + 1];
    let mut facet_uses: HashMap<Face, usize> = HashMap::new();
    let mut used: HashSet<usize> = HashSet::new();
    for cell in cells {
        let mut sorted = cell.clone();
        sorted.sort_unstable();
        if !sets.insert(sorted.clone()) {
            return Err(format!("simplex on {sorted:?} occurs twice"));
        }
        used.extend(sorted.iter().copied());
        for mask in 1u32..(1 << (dim + 1)) {
            let sub: Face = (0..=dim)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| sorted[k])
                .collect();
            let r = sub.len() - 1;
            if r == dim - 1 {
                *facet_uses.entry(sub.clone()).or_default() += 1;
            }
            distinct[r].insert(sub);
        }
    }
    if used.len() != lattice.num_vertices() {
        return Err(format!("simplices use {} of {} vertices", used.len(), lattice.num_vertices()));
    }
    let mut uses: Vec<(&Face, &usize)> = facet_uses.iter().collect();
    uses.sort();
    for (f, &n) in uses {
        let boundary = lattice.facets().iter().any(|pf| is_subset(f, pf));
        let want = if boundary { 1 } else { 2 };
        if n != want {
            return Err(format!("facet {f:?} occurs in {n} simplices"));
        }
    }
    let chi: i64 = (0..=dim).map(|r| sign(r) * distinct[r].len() as i64).sum();
    if chi != 1 {
        return Err(format!("simplices form a complex with Euler characteristic {chi}"));
    }
    Ok(())
}

impl Triangulation {
    /// Number of ideal vertices in each simplex.
    pub fn ideal_counts(&self, complex: &PolyhedralComplex) -> Vec<usize> {
        self.simplices
            .iter()
            .map(|s| {
                let tags = &complex.polyhedron(s.polyhedron).tags;
                s.vertices
                    .iter()
                    .filter(|&&v| tags[v] == crate::complex::VertexTag::Ideal)
                    .count()
            })
            .collect()
    }

    /// `vtc-1` document: every cell a simplex whose facet `i` omits vertex `i`.
    pub fn to_file(&self, complex: &PolyhedralComplex, cover: Option<CoverEntry>) -> ComplexFile {
        let n = self.dim;
        let facets: Vec<Vec<usize>> = (0..=n)
            .map(|i| (0..=n).filter(|&k| k != i).collect())
            .collect();
        let polyhedra = self
            .simplices
            .iter()
            .map(|s| {
                let poly = complex.polyhedron(s.polyhedron);
                PolyhedronEntry {
                    dim: n,
                    vertices: s
                        .vertices
                        .iter()
                        .map(|&v| VertexEntry {
                            label: poly.labels[v].clone(),
                            tag: poly.tags[v],
                            coords: poly.coords.as_ref().map(|c| c[v].to_strings()),
                        })
                        .collect(),
                    facets: facets.clone(),
                    provenance: Some(Provenance {
                        polyhedron: s.polyhedron,
                        vertices: s.vertices.clone(),
                    }),
                }
            })
            .collect();
        let pairings = self
            .pairings
            .iter()
            .map(|p| PairingEntry {
                src: [p.source.0, p.source.1],
                dst: [p.target.0, p.target.1],
                map: p.map.iter().map(|&(a, b)| [a, b]).collect(),
            })
            .collect();
        ComplexFile {
            format: COMPLEX_FORMAT.to_string(),
            name: None,
            polyhedra,
            pairings,
            cover,
            certificate: Some(self.certificate.clone()),
        }
    }

    /// Reads a triangulation back from a `vtc-1` document written by
    /// [`Triangulation::to_file`]. Vertex classes are recomputed from the
    /// provenance against `complex`.
    pub fn from_file(file: &ComplexFile, complex: &PolyhedralComplex) -> Result<Self, PullingError> {
        let n = complex.dim();
        let mut simplices = Vec::with_capacity(file.polyhedra.len());
        for (s, entry) in file.polyhedra.iter().enumerate() {
            let prov = entry.provenance.as_ref().ok_or_else(|| {
                PullingError::Malformed(format!("simplex {s} has no provenance"))
            })?;
            if entry.vertices.len() != n + 1 || prov.vertices.len() != n + 1 {
                return Err(PullingError::Malformed(format!("cell {s} is not an {n}-simplex")));
            }
            for (i, f) in entry.facets.iter().enumerate() {
                let want: Vec<usize> = (0..=n).filter(|&k| k != i).collect();
                let mut got = f.clone();
                got.sort_unstable();
                if got != want {
                    return Err(PullingError::Malformed(format!(
                        "simplex {s}: facet {i} must omit vertex {i}"
                    )));
                }
            }
            let p = prov.polyhedron;
            if p >= complex.polyhedra().len()
                || prov.vertices.iter().any(|&v| v >= complex.polyhedron(p).num_vertices())
            {
                return Err(PullingError::Malformed(format!(
                    "simplex {s}: provenance outside the complex"
                )));
            }
            simplices.push(Simplex {
                polyhedron: p,
                classes: prov
                    .vertices
                    .iter()
                    .map(|&v| complex.vertex_class(VertexRef { polyhedron: p, vertex: v }))
                    .collect(),
                vertices: prov.vertices.clone(),
            });
        }
        let pairings = file
            .pairings
            .iter()
            .map(|e| SimplexPairing {
                source: (e.src[0], e.src[1]),
                target: (e.dst[0], e.dst[1]),
                map: e.map.iter().map(|m| (m[0], m[1])).collect(),
            })
            .collect();
        Ok(Self {
            dim: n,
            simplices,
            pairings,
            certificate: file.certificate.clone().unwrap_or_default(),
        })
    }
}
