//! Transitive permutation representations of bounded degree by coset-table
//! backtracking.
//!
//! A table has one row per coset and two columns per free generator
//! (`2j` for generator `j`, `2j + 1` for its inverse). The search fills the
//! first undefined entry in row-major order, either with an existing coset
//! whose inverse slot is free or with a new coset, then closes relator cycles
//! wherever a single entry is missing. Complete tables are kept only if no
//! other base point relabels them to a lexicographically smaller table, so
//! each conjugacy class of subgroups is emitted once.

use std::ops::ControlFlow;

use super::perm::{Permutation, PermutationRep};
use crate::presentation::GroupPresentation;

const UNDEF: u32 = u32::MAX;

struct Search<'a> {
    degree: usize,
    cols: usize,
    relators: Vec<Vec<usize>>,
    table: Vec<u32>,
    trail: Vec<usize>,
    cosets: usize,
    pres: &'a GroupPresentation,
    free: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(pres: &'a GroupPresentation, degree: usize) -> Self {
        let free = pres.free_generators();
        let column: Vec<Option<usize>> = (0..pres.num_generators)
            .map(|g| free.iter().position(|&f| f == g))
            .collect();
        let mut relators: Vec<Vec<usize>> = Vec::new();
        for r in pres.effective_relators() {
            let cols: Vec<usize> = r
                .letters()
                .iter()
                .map(|l| 2 * column[l.generator].expect("free letter") + l.inverse as usize)
                .collect();
            // all cyclic rotations deduce more than the relator alone
            for k in 0..cols.len() {
                let mut rot = cols[k..].to_vec();
                rot.extend_from_slice(&cols[..k]);
                if !relators.contains(&rot) {
                    relators.push(rot);
                }
            }
        }
        let cols = 2 * free.len();
        Self {
            degree,
            cols,
            relators,
            table: vec![UNDEF; degree * cols],
            trail: Vec::new(),
            cosets: 1,
            pres,
            free,
        }
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    fn set(&mut self, c: u32, x: usize, t: u32) {
        let i = c as usize * self.cols + x;
        self.table[i] = t;
        self.trail.push(i);
    }

    fn define(&mut self, c: u32, x: usize, t: u32) -> bool {
        let a = self.get(c, x);
        let b = self.get(t, x ^ 1);
        if (a != UNDEF && a != t) || (b != UNDEF && b != c) {
            return false;
        }
        if a == UNDEF {
            self.set(c, x, t);
        }
        if b == UNDEF {
            self.set(t, x ^ 1, c);
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().expect("nonempty");
            self.table[i] = UNDEF;
        }
    }

    /// Closes relator cycles until nothing changes; false on a contradiction.
    fn deduce(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.cosets as u32 {
                for r in 0..self.relators.len() {
                    let len = self.relators[r].len();
                    let mut f = c;
                    let mut i = 0;
                    while i < len {
                        let t = self.get(f, self.relators[r][i]);
                        if t == UNDEF {
                            break;
                        }
                        f = t;
                        i += 1;
                    }
                    if i == len {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let mut b = c;
                    let mut j = len;
                    while j > i {
                        let t = self.get(b, self.relators[r][j - 1] ^ 1);
                        if t == UNDEF {
                            break;
                        }
                        b = t;
                        j -= 1;
                    }
                    if j == i {
                        return false;
                    }
                    if j == i + 1 {
                        let x = self.relators[r][i];
                        if !self.define(f, x, b) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// True unless relabeling from some other base point gives a smaller table.
    fn is_canonical(&self) -> bool {
        let d = self.degree;
        let mut label = vec![UNDEF; d];
        let mut order = Vec::with_capacity(d);
        for base in 1..d as u32 {
            label.iter_mut().for_each(|l| *l = UNDEF);
            order.clear();
            label[base as usize] = 0;
            order.push(base);
            'cmp: for row in 0..d {
                let old = order[row];
                for x in 0..self.cols {
                    let t = self.get(old, x);
                    if label[t as usize] == UNDEF {
                        label[t as usize] = order.len() as u32;
                        order.push(t);
                    }
                    let mine = self.get(row as u32, x);
                    let theirs = label[t as usize];
                    if theirs < mine {
                        return false;
                    }
                    if theirs > mine {
                        break 'cmp;
                    }
                }
            }
        }
        true
    }

    fn rep(&self) -> PermutationRep {
        let d = self.degree;
        let mut perms = vec![Permutation::identity(d); self.pres.num_generators];
        for (j, &g) in self.free.iter().enumerate() {
            let images = (0..d as u32).map(|c| self.get(c, 2 * j)).collect();
            perms[g] = Permutation::from_images(images).expect("complete coset table");
        }
        PermutationRep::new(d, perms).expect("degree matches")
    }

    fn first_undefined(&self) -> Option<(u32, usize)> {
        let end = self.cosets * self.cols;
        self.table[..end]
            .iter()
            .position(|&t| t == UNDEF)
            .map(|i| ((i / self.cols) as u32, i % self.cols))
    }

    fn run<F>(&mut self, emit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(PermutationRep) -> ControlFlow<()>,
    {
        let Some((c, x)) = self.first_undefined() else {
            if self.cosets == self.degree && self.is_canonical() {
                return emit(self.rep());
            }
            return ControlFlow::Continue(());
        };
        let existing = self.cosets as u32;
        let fresh = if self.cosets < self.degree {
            Some(existing)
        } else {
            None
        };
        for t in (0..existing).chain(fresh) {
            if t < existing && self.get(t, x ^ 1) != UNDEF {
                continue;
            }
            let mark = self.trail.len();
            let saved = self.cosets;
            if t == existing {
                self.cosets += 1;
            }
            if self.define(c, x, t) && self.deduce() {
                self.run(emit)?;
            }
            self.undo(mark);
            self.cosets = saved;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `f` on each transitive degree-`degree` rep satisfying the
/// presentation, one per conjugacy class, in lexicographic order of coset
/// tables. Tree generators map to the identity.
pub fn for_each_rep<F>(pres: &GroupPresentation, degree: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(PermutationRep) -> ControlFlow<()>,
{
    if degree == 0 {
        return ControlFlow::Continue(());
    }
    let mut s = Search::new(pres, degree);
    if !s.deduce() {
        return ControlFlow::Continue(());
    }
    s.run(&mut f)
}

/// The first `limit` reps of [`for_each_rep`], or all of them.
pub fn enumerate_reps(pres: &GroupPresentation, degree: usize, limit: Option<usize>) -> Vec<PermutationRep> {
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    let _ = for_each_rep(pres, degree, |r| {
        out.push(r);
        if Some(out.len()) == limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Letter, Word};

    fn word(gens: &[(usize, bool)]) -> Word {
        Word(gens.iter().map(|&(generator, inverse)| Letter { generator, inverse }).collect())
    }

    #[test]
    fn free_group_counts() {
        // conjugacy classes of index-n subgroups of F2: 1, 3, 7, 26
        let f2 = GroupPresentation::new(2, vec![]);
        let counts: Vec<usize> = (1..=4).map(|d| enumerate_reps(&f2, d, None).len()).collect();
        assert_eq!(counts, vec![1, 3, 7, 26]);
    }

    #[test]
    fn cyclic_groups() {
        // Z/6 has one subgroup of each index dividing 6
        let z6 = GroupPresentation::new(1, vec![word(&[(0, false); 6])]);
        let counts: Vec<usize> = (1..=7).map(|d| enumerate_reps(&z6, d, None).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 0, 0, 1, 0]);
        let trivial = GroupPresentation::new(1, vec![word(&[(0, false)])]);
        assert!(enumerate_reps(&trivial, 2, None).is_empty());
        assert_eq!(enumerate_reps(&trivial, 1, None).len(), 1);
    }

    #[test]
    fn s3_subgroups() {
        // <a, b | a^2, b^3, (ab)^2>: index 2 (A3), index 3 (point stabilizers),
        // index 6 (trivial subgroup)
        let s3 = GroupPresentation::new(
            2,
            vec![
                word(&[(0, false); 2]),
                word(&[(1, false); 3]),
                word(&[(0, false), (1, false), (0, false), (1, false)]),
            ],
        );
        let counts: Vec<usize> = (1..=6).map(|d| enumerate_reps(&s3, d, None).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 0, 0, 1]);
        for d in 1..=6 {
            for r in enumerate_reps(&s3, d, None) {
                assert!(r.is_transitive() && r.satisfies(&s3));
            }
        }
    }

    #[test]
    fn limits_and_order() {
        let f2 = GroupPresentation::new(2, vec![]);
        let all = enumerate_reps(&f2, 3, None);
        assert_eq!(enumerate_reps(&f2, 3, Some(2)), all[..2].to_vec());
        assert!(enumerate_reps(&f2, 3, Some(0)).is_empty());
    }
}
