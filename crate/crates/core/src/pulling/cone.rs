//! Staged coning of a single polytope.
//!
//! Stage `j` takes every cell containing the `j`-th vertex `v` of the order
//! and replaces it by the cones from `v` over its facets missing `v`. Cells
//! are carried by their facet vertex sets in the polytope's own vertex ids.

use std::collections::{HashMap, HashSet};

use super::PullingError;
use crate::lattice::{is_subset, sign, Face, FaceLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Cone apexes, in the order they were added.
    pub apexes: Vec<usize>,
    /// Sorted vertex ids.
    pub vertices: Face,
    pub facets: Vec<Face>,
}

impl Cell {
    fn lattice(&self, dim: usize) -> Result<FaceLattice, String> {
        let local: HashMap<usize, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| f.iter().map(|v| local[v]).collect())
            .collect();
        FaceLattice::from_facets(dim, self.vertices.len(), &facets)
            .map_err(|e| format!("cell {:?}: {e}", self.vertices))
    }

    /// All faces of the cell in the polytope's vertex ids, by rank.
    fn faces(&self, dim: usize) -> Result<Vec<Vec<Face>>, String> {
        let l = self.lattice(dim)?;
        Ok((0..=dim)
            .map(|r| {
                l.faces(r)
                    .iter()
                    .map(|f| f.iter().map(|&i| self.vertices[i]).collect())
                    .collect()
            })
            .collect())
    }
}

/// The cells after one coning step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub step: usize,
    pub vertex: usize,
    pub cells: Vec<Cell>,
}

/// A pulling subdivision of one polytope with its stage trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSubdivision {
    /// Vertex tuples, each listed in pulling order.
    pub simplices: Vec<Vec<usize>>,
    pub stages: Vec<Stage>,
}

fn cone(cell: &Cell, lattice: &FaceLattice, apex: usize, dim: usize) -> Vec<Cell> {
    let to_global = |f: &[usize]| -> Face { f.iter().map(|&i| cell.vertices[i]).collect() };
    let local_apex = cell.vertices.binary_search(&apex).expect("apex in cell");
    let mut out = Vec::new();
    for facet in lattice.facets() {
        if facet.binary_search(&local_apex).is_ok() {
            continue;
        }
        let base = to_global(facet);
        let mut vertices = base.clone();
        vertices.push(apex);
        vertices.sort_unstable();
        let mut facets = vec![base];
        for ridge in lattice.faces(dim - 2) {
            if is_subset(ridge, facet) {
                let mut g = to_global(ridge);
                g.push(apex);
                g.sort_unstable();
                facets.push(g);
            }
        }
        let mut apexes = cell.apexes.clone();
        apexes.push(apex);
        out.push(Cell {
            apexes,
            vertices,
            facets,
        });
    }
    out
}

/// Checks that the cells of a stage tile the polytope: every polytope vertex
/// is used, cell facets on the boundary occur once and interior ones twice,
/// and the cell complex has Euler characteristic 1.
fn audit(polytope: &FaceLattice, cells: &[Cell]) -> Result<(), String> {
    let dim = polytope.dim();
    let mut used: HashSet<usize> = HashSet::new();
    let mut distinct: Vec<HashSet<Face>> = vec![HashSet::new(); dim + 1];
    let mut facet_uses: HashMap<Face, usize> = HashMap::new();
    for cell in cells {
        used.extend(cell.vertices.iter().copied());
        let faces = cell.faces(dim)?;
        for (r, fs) in faces.into_iter().enumerate() {
            distinct[r].extend(fs);
        }
        for f in &cell.facets {
            *facet_uses.entry(f.clone()).or_default() += 1;
        }
    }
    if used.len() != polytope.num_vertices() {
        return Err(format!(
            "cells use {} of {} vertices",
            used.len(),
            polytope.num_vertices()
        ));
    }
    let mut sorted: Vec<(&Face, &usize)> = facet_uses.iter().collect();
    sorted.sort();
    for (f, &n) in sorted {
        let boundary = polytope.facets().iter().any(|pf| is_subset(f, pf));
        let want = if boundary { 1 } else { 2 };
        if n != want {
            return Err(format!(
                "{} facet {f:?} occurs in {n} cells",
                if boundary { "boundary" } else { "interior" }
            ));
        }
    }
    let chi: i64 = (0..=dim).map(|r| sign(r) * distinct[r].len() as i64).sum();
    if chi != 1 {
        return Err(format!("cell complex has Euler characteristic {chi}"));
    }
    Ok(())
}

/// Pulls `lattice` at the vertices in `order` (`order[0]` first).
pub fn pull_lattice(lattice: &FaceLattice, order: &[usize]) -> Result<LocalSubdivision, PullingError> {
    let n = lattice.num_vertices();
    let dim = lattice.dim();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(PullingError::BadOrder(format!(
                "{order:?} is not an ordering of 0..{n}"
            )));
        }
        position[v] = i;
    }
    if order.len() != n {
        return Err(PullingError::BadOrder(format!(
            "{} vertices ordered, polytope has {n}",
            order.len()
        )));
    }

    let mut cells = vec![Cell {
        apexes: Vec::new(),
        vertices: (0..n).collect(),
        facets: lattice.facets().to_vec(),
    }];
    let mut stages = Vec::new();
    for (step, &v) in order.iter().enumerate() {
        if cells.iter().all(|c| c.vertices.len() == dim + 1) {
            break;
        }
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells {
            if cell.vertices.len() == dim + 1 || cell.vertices.binary_search(&v).is_err() {
                next.push(cell);
                continue;
            }
            let l = cell
                .lattice(dim)
                .map_err(|detail| PullingError::Audit { step, detail })?;
            next.extend(cone(&cell, &l, v, dim));
        }
        cells = next;
        audit(lattice, &cells).map_err(|detail| PullingError::Audit { step, detail })?;
        stages.push(Stage {
            step,
            vertex: v,
            cells: cells.clone(),
        });
    }

    let mut simplices = Vec::with_capacity(cells.len());
    for cell in &cells {
        if cell.vertices.len() != dim + 1 {
            return Err(PullingError::NotSimplicial {
                vertices: cell.vertices.clone(),
            });
        }
        if cell.apexes.windows(2).any(|w| position[w[0]] >= position[w[1]]) {
            return Err(PullingError::Audit {
                step: order.len(),
                detail: format!("cone history {:?} is not increasing", cell.apexes),
            });
        }
        let mut s = cell.vertices.clone();
        s.sort_by_key(|&v| position[v]);
        simplices.push(s);
    }
    Ok(LocalSubdivision { simplices, stages })
}

/// Simplices of the pulling subdivision; `order` must be a valid ordering.
pub fn cone_cells(lattice: &FaceLattice, order: &[usize]) -> Vec<Vec<usize>> {
    pull_lattice(lattice, order)
        .expect("pulling a valid lattice in a valid order")
        .simplices
}
