//! Diagonals: pairs of distinct vertices of one polyhedron, and whether the
//! gluing identifies them.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::complex::{FacetRef, PolyhedralComplex, VertexRef};
use crate::covers::CoverComplex;
use crate::format::fingerprint;
use crate::presentation::{Letter, Word};

/// An unordered vertex pair `v < w` of one polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonal {
    pub polyhedron: usize,
    pub v: usize,
    pub w: usize,
    pub returning: bool,
    /// For returning diagonals: pairings leading from `v` to `w`.
    pub witness: Option<Word>,
    /// In a cover's diagonal set: index of the base diagonal this one lifts.
    pub base: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSet {
    pub diagonals: Vec<Diagonal>,
    pub complex_fingerprint: String,
}

impl DiagonalSet {
    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn returning_count(&self) -> usize {
        self.diagonals.iter().filter(|d| d.returning).count()
    }

    pub fn returning(&self) -> impl Iterator<Item = (usize, &Diagonal)> {
        self.diagonals.iter().enumerate().filter(|(_, d)| d.returning)
    }

    /// Diagonals of a cover set lifting base diagonal `base`.
    pub fn lifts_of(&self, base: usize) -> impl Iterator<Item = &Diagonal> {
        self.diagonals.iter().filter(move |d| d.base == Some(base))
    }

    pub fn returning_per_polyhedron(&self, polyhedra: usize) -> Vec<usize> {
        let mut out = vec![0; polyhedra];
        for d in &self.diagonals {
            if d.returning {
                out[d.polyhedron] += 1;
            }
        }
        out
    }
}

impl fmt::Display for DiagonalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} diagonals, {} returning",
            self.len(),
            self.returning_count()
        )?;
        for d in &self.diagonals {
            write!(f, "  P{} ({}, {})", d.polyhedron, d.v, d.w)?;
            match &d.witness {
                Some(w) => writeln!(f, " returning via {w}")?,
                None => writeln!(f)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DiagonalError {
    #[error("diagonal ({v}, {w}) of polyhedron {polyhedron} is not returning")]
    NotReturning { polyhedron: usize, v: usize, w: usize },
    #[error("diagonal set belongs to a different complex than the cover's base")]
    MismatchedBase,
}

/// Letters leaving vertex instance `at`, sorted by generator then direction,
/// with the vertex instance each lands on.
fn moves(complex: &PolyhedralComplex, at: VertexRef) -> Vec<(Letter, VertexRef)> {
    let lattice = &complex.polyhedron(at.polyhedron).lattice;
    let mut out = Vec::new();
    for f in lattice.facets_containing(&[at.vertex]) {
        let Some((c, phi)) = complex.crossing(FacetRef {
            polyhedron: at.polyhedron,
            facet: f,
        }) else {
            continue;
        };
        let to = VertexRef {
            polyhedron: phi.target.polyhedron,
            vertex: phi.map(at.vertex).expect("vertex on facet"),
        };
        out.push((
            Letter {
                generator: c.pairing,
                inverse: !c.forward,
            },
            to,
        ));
    }
    out.sort();
    out
}

/// BFS from `start` on the vertex-instance graph; returns predecessor links.
fn bfs(
    complex: &PolyhedralComplex,
    start: VertexRef,
) -> HashMap<VertexRef, Option<(VertexRef, Letter)>> {
    let mut prev = HashMap::new();
    prev.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(at) = queue.pop_front() {
        for (letter, to) in moves(complex, at) {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(to) {
                e.insert(Some((at, letter)));
                queue.push_back(to);
            }
        }
    }
    prev
}

fn path_to(
    prev: &HashMap<VertexRef, Option<(VertexRef, Letter)>>,
    end: VertexRef,
) -> Option<Word> {
    let mut letters = Vec::new();
    let mut at = end;
    loop {
        match prev.get(&at)? {
            None => break,
            Some((from, l)) => {
                letters.push(*l);
                at = *from;
            }
        }
    }
    letters.reverse();
    Some(Word(letters))
}

/// A shortest chain of pairings carrying `(P, v)` to `(P, w)`; ties go to the
/// lower generator index, forward before inverse.
pub fn witness_word(complex: &PolyhedralComplex, diagonal: &Diagonal) -> Result<Word, DiagonalError> {
    let start = VertexRef {
        polyhedron: diagonal.polyhedron,
        vertex: diagonal.v,
    };
    let end = VertexRef {
        polyhedron: diagonal.polyhedron,
        vertex: diagonal.w,
    };
    let not_returning = DiagonalError::NotReturning {
        polyhedron: diagonal.polyhedron,
        v: diagonal.v,
        w: diagonal.w,
    };
    if complex.vertex_class(start) != complex.vertex_class(end) {
        return Err(not_returning);
    }
    path_to(&bfs(complex, start), end).ok_or(not_returning)
}

/// Follows `word` from vertex instance `start`; `None` if some letter names
/// a pairing whose facet does not contain the current vertex.
pub fn replay_word(complex: &PolyhedralComplex, start: VertexRef, word: &Word) -> Option<VertexRef> {
    let mut at = start;
    for letter in word.letters() {
        let (_, to) = moves(complex, at)
            .into_iter()
            .find(|(l, _)| l == letter)?;
        at = to;
    }
    Some(at)
}

/// True when `word` carries `(P, v)` to `(P, w)`.
pub fn replay_witness(complex: &PolyhedralComplex, diagonal: &Diagonal, word: &Word) -> bool {
    let start = VertexRef {
        polyhedron: diagonal.polyhedron,
        vertex: diagonal.v,
    };
    replay_word(complex, start, word)
        == Some(VertexRef {
            polyhedron: diagonal.polyhedron,
            vertex: diagonal.w,
        })
}

/// All diagonals with returning flags and verified witnesses.
pub fn enumerate_diagonals(complex: &PolyhedralComplex) -> DiagonalSet {
    let mut diagonals = Vec::new();
    for (p, poly) in complex.polyhedra().iter().enumerate() {
        let n = poly.num_vertices();
        for v in 0..n {
            let start = VertexRef { polyhedron: p, vertex: v };
            let class = complex.vertex_class(start);
            let mut tree = None;
            for w in v + 1..n {
                let end = VertexRef { polyhedron: p, vertex: w };
                let returning = complex.vertex_class(end) == class;
                let witness = if returning {
                    let prev = tree.get_or_insert_with(|| bfs(complex, start));
                    let word = path_to(prev, end).expect("same class means reachable");
                    debug_assert_eq!(replay_word(complex, start, &word), Some(end));
                    Some(word)
                } else {
                    None
                };
                diagonals.push(Diagonal {
                    polyhedron: p,
                    v,
                    w,
                    returning,
                    witness,
                    base: None,
                });
            }
        }
    }
    let set = DiagonalSet {
        diagonals,
        complex_fingerprint: fingerprint(complex),
    };
    for d in &set.diagonals {
        if let Some(w) = &d.witness {
            assert!(replay_witness(complex, d, w), "witness replay failed");
        }
    }
    set
}

/// Diagonal set of the cover's total complex, each diagonal tagged with the
/// base diagonal it projects to.
pub fn diagonals_after_cover(
    base: &DiagonalSet,
    cover: &CoverComplex,
) -> Result<DiagonalSet, DiagonalError> {
    if fingerprint(cover.base()) != base.complex_fingerprint {
        return Err(DiagonalError::MismatchedBase);
    }
    let index: HashMap<(usize, usize, usize), usize> = base
        .diagonals
        .iter()
        .enumerate()
        .map(|(i, d)| ((d.polyhedron, d.v, d.w), i))
        .collect();
    let mut set = enumerate_diagonals(cover.total());
    for d in &mut set.diagonals {
        let (p, _) = cover.project(d.polyhedron);
        d.base = Some(index[&(p, d.v, d.w)]);
    }
    Ok(set)
}
