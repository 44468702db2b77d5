//! Face-pairing presentations of the fundamental group.
//!
//! Generator `i` is facet pairing `i`, read from its source facet to its
//! target facet. Walking once around a codimension-2 face class gives a
//! relator. Pairings on a spanning tree of the dual graph (polyhedra joined by
//! pairings) are recorded as tree generators; they are trivial in the group.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{FacetRef, PolyhedralComplex};
use crate::lattice::Face;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Self {
        Self {
            generator,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.generator)
        } else {
            write!(f, "g{}", self.generator)
        }
    }
}

/// A word in the generators, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).freely_reduced()
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.len() * n).collect()).freely_reduced()
    }

    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn cyclically_reduced(&self) -> Word {
        let mut w = self.freely_reduced().0;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
            w.pop();
            w.remove(0);
        }
        Word(w)
    }

    /// `(generator, exponent sum)` over all generators `0..n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut e = vec![0i64; n];
        for l in &self.0 {
            e[l.generator] += if l.inverse { -1 } else { 1 };
        }
        e
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Where a codimension-2 cycle starts: polyhedron, face (sorted vertex ids)
/// and the facet through which the walk enters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleBase {
    pub polyhedron: usize,
    pub face: Face,
    pub entry_facet: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
    /// Base instance of each relator's cycle; empty for abstract presentations.
    pub cycles: Vec<CycleBase>,
    /// Generators on the spanning tree of the dual graph.
    pub tree_generators: Vec<usize>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("unsupported dimension {0} for presentation extraction (supported: 2, 3)")]
    UnsupportedDimension(usize),
    #[error("presentation needs a closed complex: facet {} of polyhedron {} is unpaired", .0.facet, .0.polyhedron)]
    NotClosed(FacetRef),
    #[error("presentation needs a connected complex: polyhedron {0} is unreachable")]
    Disconnected(usize),
    #[error("cycle around face {face:?} of polyhedron {polyhedron} does not close")]
    OpenCycle { polyhedron: usize, face: Face },
}

impl GroupPresentation {
    /// An abstract presentation with no tree generators.
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Self {
        Self {
            num_generators,
            relators,
            cycles: Vec::new(),
            tree_generators: Vec::new(),
        }
    }

    pub fn is_tree_generator(&self, g: usize) -> bool {
        self.tree_generators.contains(&g)
    }

    /// Generators that survive after the tree generators are set to 1.
    pub fn free_generators(&self) -> Vec<usize> {
        (0..self.num_generators)
            .filter(|g| !self.is_tree_generator(*g))
            .collect()
    }

    /// Relators with tree letters deleted, cyclically reduced, nonempty.
    pub fn effective_relators(&self) -> Vec<Word> {
        let tree: HashSet<usize> = self.tree_generators.iter().copied().collect();
        let mut out: Vec<Word> = Vec::new();
        for r in &self.relators {
            let w = Word(
                r.0.iter()
                    .copied()
                    .filter(|l| !tree.contains(&l.generator))
                    .collect(),
            )
            .cyclically_reduced();
            if !w.is_empty() && !out.contains(&w) {
                out.push(w);
            }
        }
        out
    }

    /// All relations, including one single-letter relator per tree generator.
    pub fn all_relators(&self) -> Vec<Word> {
        let mut v = self.relators.clone();
        v.extend(self.tree_generators.iter().map(|&g| Word(vec![Letter::new(g)])));
        v
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.num_generators).map(|g| format!("g{g}")).collect();
        let rels: Vec<String> = self.all_relators().iter().map(|r| r.to_string()).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// Extracts the face-pairing presentation of a closed, connected complex of
/// dimension 2 or 3.
pub fn extract_presentation(
    complex: &PolyhedralComplex,
) -> Result<GroupPresentation, PresentationError> {
    let dim = complex.dim();
    if !(2..=3).contains(&dim) {
        return Err(PresentationError::UnsupportedDimension(dim));
    }
    for (p, poly) in complex.polyhedra().iter().enumerate() {
        for f in 0..poly.lattice.facets().len() {
            let facet = FacetRef { polyhedron: p, facet: f };
            if complex.crossing_of(facet).is_none() {
                return Err(PresentationError::NotClosed(facet));
            }
        }
    }
    let tree_generators = spanning_tree(complex)?;

    let rank = dim - 2;
    let mut visited: HashSet<(usize, Face)> = HashSet::new();
    let mut relators = Vec::new();
    let mut cycles = Vec::new();
    let limit = 2 * complex
        .polyhedra()
        .iter()
        .map(|p| p.lattice.face_count(rank))
        .sum::<usize>()
        + 2;
    for (p, poly) in complex.polyhedra().iter().enumerate() {
        for face in poly.lattice.faces(rank) {
            if visited.contains(&(p, face.clone())) {
                continue;
            }
            let containing = poly.lattice.facets_containing(face);
            debug_assert_eq!(containing.len(), 2);
            let base = CycleBase {
                polyhedron: p,
                face: face.clone(),
                entry_facet: containing[0],
            };
            let word = walk_cycle(complex, &base, limit, |q, f| {
                visited.insert((q, f));
            })
            .ok_or_else(|| PresentationError::OpenCycle {
                polyhedron: p,
                face: face.clone(),
            })?;
            relators.push(word);
            cycles.push(base);
        }
    }
    Ok(GroupPresentation {
        num_generators: complex.pairings().len(),
        relators,
        cycles,
        tree_generators,
    })
}

fn spanning_tree(complex: &PolyhedralComplex) -> Result<Vec<usize>, PresentationError> {
    let n = complex.polyhedra().len();
    let mut seen = vec![false; n];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        for (k, pr) in complex.pairings().iter().enumerate() {
            let other = if pr.source.polyhedron == p {
                pr.target.polyhedron
            } else if pr.target.polyhedron == p {
                pr.source.polyhedron
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                tree.push(k);
                queue.push_back(other);
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(p) => Err(PresentationError::Disconnected(p)),
        None => Ok(tree),
    }
}

/// One step around a codimension-2 face: leave the current polyhedron through
/// the facet other than `entry` that contains `face`.
fn step(
    complex: &PolyhedralComplex,
    polyhedron: usize,
    face: &[usize],
    entry: usize,
) -> Option<(Letter, usize, Vec<usize>, usize)> {
    let mut sorted = face.to_vec();
    sorted.sort_unstable();
    let lattice = &complex.polyhedron(polyhedron).lattice;
    let containing = lattice.facets_containing(&sorted);
    if containing.len() != 2 || !containing.contains(&entry) {
        return None;
    }
    let exit = if containing[0] == entry {
        containing[1]
    } else {
        containing[0]
    };
    let (crossing, oriented) = complex.crossing(FacetRef {
        polyhedron,
        facet: exit,
    })?;
    let image: Option<Vec<usize>> = face.iter().map(|&v| oriented.map(v)).collect();
    Some((
        Letter {
            generator: crossing.pairing,
            inverse: !crossing.forward,
        },
        oriented.target.polyhedron,
        image?,
        oriented.target.facet,
    ))
}

/// Walks around the codimension-2 class of `base` until the starting
/// instance recurs with the identity vertex map.
fn walk_cycle(
    complex: &PolyhedralComplex,
    base: &CycleBase,
    limit: usize,
    mut visit: impl FnMut(usize, Face),
) -> Option<Word> {
    let start = (base.polyhedron, base.face.clone(), base.entry_facet);
    visit(base.polyhedron, base.face.clone());
    let mut state = start.clone();
    let mut word = Vec::new();
    for _ in 0..limit {
        let (letter, q, image, entry) = step(complex, state.0, &state.1, state.2)?;
        word.push(letter);
        let mut sorted = image.clone();
        sorted.sort_unstable();
        visit(q, sorted);
        state = (q, image, entry);
        if state == start {
            return Some(Word(word));
        }
    }
    None
}

/// Re-walks `word` from `base`, following the pairings the letters name.
/// True when every letter is the pairing actually crossed and the walk ends
/// where it began with the identity vertex map.
pub fn replay_cycle(complex: &PolyhedralComplex, base: &CycleBase, word: &Word) -> bool {
    let start = (base.polyhedron, base.face.clone(), base.entry_facet);
    let mut state = start.clone();
    for letter in word.letters() {
        match step(complex, state.0, &state.1, state.2) {
            Some((l, q, image, entry)) if l == *letter => state = (q, image, entry),
            _ => return false,
        }
    }
    state == start
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_square_is_commutator() {
        let p = extract_presentation(&fixtures::torus_square()).unwrap();
        assert_eq!(p.num_generators, 2);
        assert_eq!(p.relators.len(), 1);
        assert!(p.tree_generators.is_empty());
        let r = &p.relators[0];
        assert_eq!(r.len(), 4);
        assert_eq!(r.exponent_sums(2), vec![0, 0]);
        // a b a^-1 b^-1 up to cyclic rotation, inversion and relabeling:
        // consecutive letters alternate generators and each appears with both signs.
        for i in 0..4 {
            assert_ne!(r.0[i].generator, r.0[(i + 1) % 4].generator);
        }
        assert!(replay_cycle(&fixtures::torus_square(), &p.cycles[0], r));
    }

    #[test]
    fn figure_eight_presentation() {
        let c = fixtures::figure_eight();
        let p = extract_presentation(&c).unwrap();
        assert_eq!(p.num_generators, 4);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.tree_generators, vec![0]);
        assert!(p.relators.iter().all(|r| r.len() == 6 && r.is_freely_reduced()));
        for (r, base) in p.relators.iter().zip(&p.cycles) {
            assert!(replay_cycle(&c, base, r));
            let mut broken = r.clone();
            broken.0[0] = broken.0[0].inv();
            assert!(!replay_cycle(&c, base, &broken));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            extract_presentation(&fixtures::unit_cube()).unwrap_err(),
            PresentationError::NotClosed(FacetRef { polyhedron: 0, facet: 0 })
        );
    }

    #[test]
    fn word_reduction() {
        let a = Letter::new(0);
        let b = Letter::new(1);
        let w = Word(vec![b, a, a.inv(), b, b.inv().inv(), a.inv(), b.inv()]);
        assert_eq!(w.freely_reduced(), Word(vec![b, b, b, a.inv(), b.inv()]));
        assert_eq!(w.cyclically_reduced(), Word(vec![b, b, a.inv()]));
        assert_eq!(Word(vec![a, b]).inverse(), Word(vec![b.inv(), a.inv()]));
        assert_eq!(Word(vec![a, b.inv()]).to_string(), "g0 g1^-1");
    }
}
