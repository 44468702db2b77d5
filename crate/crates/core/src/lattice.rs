//! Combinatorial face lattices of convex polytopes.
//!
//! A lattice is specified by its vertex count and its facets (as vertex
//! sets). Every lower-dimensional face is recovered as an intersection of
//! facets: the faces of rank `k - 1` are the maximal non-empty pairwise
//! intersections of faces of rank `k`. This is exact for convex polytopes,
//! where two distinct faces of rank `k` containing a common face `G` of rank
//! `k - 1` intersect in precisely `G`.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// A face, given by its sorted vertex ids.
pub type Face = Vec<usize>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice dimension must be at least 1")]
    ZeroDimension,
    #[error("facet {facet} references vertex {vertex}, but only {num_vertices} vertices exist")]
    VertexOutOfRange {
        facet: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("facet {facet} lists vertex {vertex} more than once")]
    RepeatedVertex { facet: usize, vertex: usize },
    #[error("facet {facet} has {size} vertices, a facet of a {dim}-polytope needs at least {dim}")]
    FacetTooSmall { facet: usize, size: usize, dim: usize },
    #[error("facets {first} and {second} have the same vertex set")]
    DuplicateFacet { first: usize, second: usize },
    #[error("facet {inner} is contained in facet {outer}")]
    NestedFacets { inner: usize, outer: usize },
    #[error("vertex {vertex} is not a face of rank 0 (it is not cut out by the facets)")]
    VertexNotAFace { vertex: usize },
    #[error("face {face:?} of rank 0 is not a single vertex")]
    FatVertex { face: Face },
    #[error("diamond property fails between {lower:?} and {upper:?}: {count} faces in between, expected 2")]
    Diamond {
        lower: Face,
        upper: Face,
        count: usize,
    },
}

/// The face lattice of a `dim`-dimensional convex polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    dim: usize,
    num_vertices: usize,
    /// `faces[k]` holds the faces of rank `k`; `faces[dim]` is the single top face.
    faces: Vec<Vec<Face>>,
    index: Vec<HashMap<Face, usize>>,
}

impl FaceLattice {
    /// Builds the lattice from facets. Facet order is preserved (facet ids are
    /// referenced by pairings); lower ranks are sorted lexicographically.
    pub fn from_facets(
        dim: usize,
        num_vertices: usize,
        facets: &[Vec<usize>],
    ) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        let mut normalized: Vec<Face> = Vec::with_capacity(facets.len());
        for (i, facet) in facets.iter().enumerate() {
            let mut sorted = facet.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(LatticeError::RepeatedVertex {
                        facet: i,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = sorted.iter().find(|&&v| v >= num_vertices) {
                return Err(LatticeError::VertexOutOfRange {
                    facet: i,
                    vertex: v,
                    num_vertices,
                });
            }
            if sorted.len() < dim {
                return Err(LatticeError::FacetTooSmall {
                    facet: i,
                    size: sorted.len(),
                    dim,
                });
            }
            normalized.push(sorted);
        }
        for i in 0..normalized.len() {
            for j in 0..normalized.len() {
                if i == j {
                    continue;
                }
                if normalized[i] == normalized[j] && i < j {
                    return Err(LatticeError::DuplicateFacet { first: i, second: j });
                }
                if normalized[i] != normalized[j] && is_subset(&normalized[i], &normalized[j]) {
                    return Err(LatticeError::NestedFacets { inner: i, outer: j });
                }
            }
        }

        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); dim + 1];
        faces[dim] = vec![(0..num_vertices).collect()];
        faces[dim - 1] = normalized;
        for k in (1..dim).rev() {
            faces[k - 1] = maximal_intersections(&faces[k]);
        }

        let lattice = Self::assemble(dim, num_vertices, faces);
        lattice.check_vertices()?;
        lattice.check_diamonds()?;
        Ok(lattice)
    }

    /// The standard `dim`-simplex on vertices `0..=dim`, facet `i` opposite vertex `i`.
    pub fn simplex(dim: usize) -> Self {
        let facets: Vec<Vec<usize>> = (0..=dim)
            .map(|skip| (0..=dim).filter(|&v| v != skip).collect())
            .collect();
        Self::from_facets(dim, dim + 1, &facets).expect("simplex lattice is valid")
    }

    fn assemble(dim: usize, num_vertices: usize, faces: Vec<Vec<Face>>) -> Self {
        let index = faces
            .iter()
            .map(|rank| {
                rank.iter()
                    .enumerate()
                    .map(|(i, f)| (f.clone(), i))
                    .collect::<HashMap<_, _>>()
            })
            .collect();
        Self {
            dim,
            num_vertices,
            faces,
            index,
        }
    }

    fn check_vertices(&self) -> Result<(), LatticeError> {
        let mut seen = vec![false; self.num_vertices];
        for face in &self.faces[0] {
            if face.len() != 1 {
                return Err(LatticeError::FatVertex { face: face.clone() });
            }
            seen[face[0]] = true;
        }
        match seen.iter().position(|s| !s) {
            Some(vertex) => Err(LatticeError::VertexNotAFace { vertex }),
            None => Ok(()),
        }
    }

    fn check_diamonds(&self) -> Result<(), LatticeError> {
        // Lower face of rank -1 is the empty face: every edge has two vertices.
        if self.dim >= 1 {
            let upper_rank = 1.min(self.dim);
            for upper in &self.faces[upper_rank] {
                let count = self.faces[0].iter().filter(|f| is_subset(f, upper)).count();
                if count != 2 {
                    return Err(LatticeError::Diamond {
                        lower: Vec::new(),
                        upper: upper.clone(),
                        count,
                    });
                }
            }
        }
        for k in 0..self.dim.saturating_sub(1) {
            for lower in &self.faces[k] {
                for upper in self.faces[k + 2].iter().filter(|u| is_subset(lower, u)) {
                    let count = self.faces[k + 1]
                        .iter()
                        .filter(|mid| is_subset(lower, mid) && is_subset(mid, upper))
                        .count();
                    if count != 2 {
                        return Err(LatticeError::Diamond {
                            lower: lower.clone(),
                            upper: upper.clone(),
                            count,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Faces of the given rank (`0..=dim`).
    pub fn faces(&self, rank: usize) -> &[Face] {
        &self.faces[rank]
    }

    pub fn facets(&self) -> &[Face] {
        &self.faces[self.dim - 1]
    }

    pub fn face_count(&self, rank: usize) -> usize {
        self.faces[rank].len()
    }

    /// Index of the face with exactly this (sorted) vertex set at `rank`.
    pub fn face_index(&self, rank: usize, vertices: &[usize]) -> Option<usize> {
        self.index.get(rank)?.get(vertices).copied()
    }

    /// Rank of the face with this sorted vertex set, if it is a face.
    pub fn rank_of(&self, vertices: &[usize]) -> Option<usize> {
        (0..=self.dim).find(|&r| self.index[r].contains_key(vertices))
    }

    pub fn is_simplex(&self) -> bool {
        self.num_vertices == self.dim + 1
    }

    /// Facets containing every vertex of `face`.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<usize> {
        self.facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| is_subset(face, f))
            .map(|(i, _)| i)
            .collect()
    }

    /// Face lattice of facet `facet`, relabelled to local ids. The returned
    /// vector maps local ids to vertex ids of `self`.
    pub fn facet_lattice(&self, facet: usize) -> (FaceLattice, Vec<usize>) {
        let verts = self.facets()[facet].clone();
        self.face_lattice(self.dim - 1, &verts)
    }

    /// Face lattice of an arbitrary face of rank `rank >= 1`, relabelled.
    pub fn face_lattice(&self, rank: usize, face: &[usize]) -> (FaceLattice, Vec<usize>) {
        assert!(rank >= 1, "vertices have no proper face lattice");
        let local: HashMap<usize, usize> =
            face.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sub_facets: Vec<Vec<usize>> = self.faces[rank - 1]
            .iter()
            .filter(|f| is_subset(f, face))
            .map(|f| f.iter().map(|v| local[v]).collect())
            .collect();
        let lattice = FaceLattice::from_facets(rank, face.len(), &sub_facets)
            .expect("faces of a valid lattice are valid lattices");
        (lattice, face.to_vec())
    }

    /// All faces of all ranks, as `(rank, vertex set)`, bottom-up.
    pub fn all_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(r, fs)| fs.iter().map(move |f| (r, f)))
    }

    /// Alternating count of proper faces, `Σ_{k<dim} (-1)^k f_k`, equal to the
    /// Euler characteristic of the boundary sphere.
    pub fn boundary_euler_characteristic(&self) -> i64 {
        (0..self.dim)
            .map(|k| sign(k) * self.faces[k].len() as i64)
            .sum()
    }
}

pub(crate) fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `a ⊆ b` for sorted slices.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Face {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn maximal_intersections(faces: &[Face]) -> Vec<Face> {
    let mut candidates: BTreeSet<Face> = BTreeSet::new();
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            let cap = intersect(&faces[i], &faces[j]);
            if !cap.is_empty() {
                candidates.insert(cap);
            }
        }
    }
    let all: Vec<Face> = candidates.into_iter().collect();
    all.iter()
        .filter(|c| !all.iter().any(|d| d.len() > c.len() && is_subset(c, d)))
        .cloned()
        .collect()
}
