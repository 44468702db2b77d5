//! Lifting a complex along a permutation representation.

use petgraph::unionfind::UnionFind;

use super::perm::PermutationRep;
use super::regular::verify_rep;
use super::CoverError;
use crate::complex::{ComplexSpec, FacetRef, PairingSpec, PolyhedralComplex, VertexRef};
use crate::format::CoverEntry;
use crate::presentation::extract_presentation;

/// `d` copies of each base polyhedron; pairing `k` glues copy `i` of its
/// source to copy `σ_k(i)` of its target. Cover polyhedron `i·n + p` is copy
/// `i` of base polyhedron `p`, and cover pairing `i·m + k` is copy `i` of base
/// pairing `k`. Copy 0 is the distinguished lift.
#[derive(Clone, Debug)]
pub struct CoverComplex {
    base: PolyhedralComplex,
    rep: PermutationRep,
    total: PolyhedralComplex,
}

impl CoverComplex {
    pub fn base(&self) -> &PolyhedralComplex {
        &self.base
    }

    pub fn rep(&self) -> &PermutationRep {
        &self.rep
    }

    pub fn total(&self) -> &PolyhedralComplex {
        &self.total
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    pub fn into_total(self) -> PolyhedralComplex {
        self.total
    }

    /// `(base polyhedron, copy)` of cover polyhedron `q`.
    pub fn project(&self, q: usize) -> (usize, usize) {
        let n = self.base.polyhedra().len();
        (q % n, q / n)
    }

    pub fn lift(&self, polyhedron: usize, copy: usize) -> usize {
        copy * self.base.polyhedra().len() + polyhedron
    }

    /// `(base pairing, copy)` of cover pairing `k`.
    pub fn project_pairing(&self, k: usize) -> (usize, usize) {
        let m = self.base.pairings().len();
        (k % m, k / m)
    }

    pub fn entry(&self) -> CoverEntry {
        CoverEntry {
            degree: self.degree(),
            generators: self.rep.cycle_strings(),
        }
    }
}

/// The lifted spec, without validation.
pub fn lift_spec(complex: &PolyhedralComplex, rep: &PermutationRep) -> ComplexSpec {
    let base = complex.to_spec();
    let n = base.polyhedra.len();
    let d = rep.degree();
    let mut polyhedra = Vec::with_capacity(d * n);
    for _ in 0..d {
        polyhedra.extend(base.polyhedra.iter().cloned());
    }
    let mut pairings = Vec::with_capacity(d * base.pairings.len());
    for i in 0..d {
        for (k, pr) in base.pairings.iter().enumerate() {
            let j = rep.perm(k).apply(i as u32) as usize;
            pairings.push(PairingSpec {
                source: FacetRef {
                    polyhedron: i * n + pr.source.polyhedron,
                    facet: pr.source.facet,
                },
                target: FacetRef {
                    polyhedron: j * n + pr.target.polyhedron,
                    facet: pr.target.facet,
                },
                map: pr.map.clone(),
            });
        }
    }
    ComplexSpec { polyhedra, pairings }
}

/// Builds and validates the cover for `rep`. The rep must match the pairing
/// count, satisfy the face-pairing presentation when one exists, and give a
/// connected total space.
pub fn build_cover(complex: &PolyhedralComplex, rep: &PermutationRep) -> Result<CoverComplex, CoverError> {
    if rep.num_generators() != complex.pairings().len() {
        return Err(CoverError::GeneratorCount {
            expected: complex.pairings().len(),
            found: rep.num_generators(),
        });
    }
    if let Ok(pres) = extract_presentation(complex) {
        verify_rep(rep, &pres)?;
    }
    let total = PolyhedralComplex::new(lift_spec(complex, rep), complex.mode())
        .map_err(|report| CoverError::Invalid(Box::new(report)))?;
    if components(complex) == 1 && components(&total) != 1 {
        return Err(CoverError::NotConnected);
    }
    Ok(CoverComplex {
        base: complex.clone(),
        rep: rep.clone(),
        total,
    })
}

fn components(c: &PolyhedralComplex) -> usize {
    let n = c.polyhedra().len();
    let mut uf = UnionFind::<usize>::new(n);
    let mut count = n;
    for pr in c.pairings() {
        if uf.union(pr.source.polyhedron, pr.target.polyhedron) {
            count -= 1;
        }
    }
    count
}

/// Vertex instances of the cover for `rep`, grouped without building it.
/// Instance `(copy i, polyhedron p, vertex v)` has id
/// `i·V + offset[p] + v`, where `V` is the base's total vertex count.
pub struct LiftedVertices {
    offsets: Vec<usize>,
    per_copy: usize,
    classes: UnionFind<usize>,
}

impl LiftedVertices {
    pub fn new(complex: &PolyhedralComplex, rep: &PermutationRep) -> Self {
        let mut offsets = Vec::with_capacity(complex.polyhedra().len());
        let mut total = 0;
        for p in complex.polyhedra() {
            offsets.push(total);
            total += p.num_vertices();
        }
        let d = rep.degree();
        let mut classes = UnionFind::new(d * total);
        let mut unions = Vec::new();
        for (k, pr) in complex.pairings().iter().enumerate() {
            let perm = rep.perm(k);
            for &(a, b) in &pr.vertex_map {
                unions.push((offsets[pr.source.polyhedron] + a, offsets[pr.target.polyhedron] + b, perm));
            }
        }
        for i in 0..d {
            for (a, b, perm) in &unions {
                let j = perm.apply(i as u32) as usize;
                classes.union(i * total + a, j * total + b);
            }
        }
        Self {
            offsets,
            per_copy: total,
            classes,
        }
    }

    fn id(&self, copy: usize, v: VertexRef) -> usize {
        copy * self.per_copy + self.offsets[v.polyhedron] + v.vertex
    }

    pub fn same_class(&self, copy_a: usize, a: VertexRef, copy_b: usize, b: VertexRef) -> bool {
        self.classes.equiv(self.id(copy_a, a), self.id(copy_b, b))
    }

    /// Whether the copy-`copy` lift of diagonal `(p, v, w)` is returning.
    pub fn lift_returning(&self, copy: usize, polyhedron: usize, v: usize, w: usize) -> bool {
        self.same_class(
            copy,
            VertexRef { polyhedron, vertex: v },
            copy,
            VertexRef { polyhedron, vertex: w },
        )
    }
}
