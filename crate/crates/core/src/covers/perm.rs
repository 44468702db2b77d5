use std::collections::VecDeque;
use std::fmt;

use super::CoverError;
use crate::presentation::{GroupPresentation, Word};

/// A permutation of `0..n`, stored as images. Displayed 1-based in cycle
/// notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, CoverError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(CoverError::Parse(format!("{images:?} is not a permutation")));
            }
            seen[i as usize] = true;
        }
        Ok(Self(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self(inv)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i as u32);
                i = self.0[i] as usize;
            }
            out.push(c);
        }
        out
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`; `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self, CoverError> {
        let bad = |m: &str| CoverError::Parse(format!("{s:?}: {m}"));
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner;
            (inner, rest) = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| bad("expected a parenthesised cycle"))?;
            rest = rest.trim_start();
            let points: Vec<usize> = inner
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad("bad point")))
                .collect::<Result<_, _>>()?;
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(bad("point out of range"));
                }
                if seen[p - 1] {
                    return Err(bad("point repeated"));
                }
                seen[p - 1] = true;
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = (points[(k + 1) % points.len()] - 1) as u32;
            }
        }
        Ok(Self(images))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

/// A homomorphism from the presentation's free group to `Sym(d)`: one
/// permutation per generator, acting on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationRep {
    degree: usize,
    perms: Vec<Permutation>,
}

impl PermutationRep {
    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self, CoverError> {
        if let Some(p) = perms.iter().find(|p| p.degree() != degree) {
            return Err(CoverError::Parse(format!(
                "permutation of degree {} in a degree-{degree} representation",
                p.degree()
            )));
        }
        if degree == 0 {
            return Err(CoverError::Parse("degree must be at least 1".into()));
        }
        Ok(Self { degree, perms })
    }

    pub fn trivial(num_generators: usize) -> Self {
        Self {
            degree: 1,
            perms: vec![Permutation::identity(1); num_generators],
        }
    }

    /// Parses one cycle string per generator.
    pub fn parse(degree: usize, generators: &[String]) -> Result<Self, CoverError> {
        let perms = generators
            .iter()
            .map(|g| Permutation::parse_cycles(g, degree))
            .collect::<Result<_, _>>()?;
        Self::new(degree, perms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_generators(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn perm(&self, generator: usize) -> &Permutation {
        &self.perms[generator]
    }

    pub fn cycle_strings(&self) -> Vec<String> {
        self.perms.iter().map(|p| p.to_string()).collect()
    }

    pub fn apply_word(&self, point: u32, word: &Word) -> u32 {
        word.letters().iter().fold(point, |i, l| {
            let p = &self.perms[l.generator];
            if l.inverse {
                p.0.iter().position(|&x| x == i).expect("bijection") as u32
            } else {
                p.apply(i)
            }
        })
    }

    pub fn word_perm(&self, word: &Word) -> Permutation {
        let invs: Vec<Permutation> = self.perms.iter().map(Permutation::inverse).collect();
        let mut out = Permutation::identity(self.degree);
        for l in word.letters() {
            let p = if l.inverse {
                &invs[l.generator]
            } else {
                &self.perms[l.generator]
            };
            out = out.then(p);
        }
        out
    }

    /// Every relator and every tree generator acts trivially.
    pub fn satisfies(&self, pres: &GroupPresentation) -> bool {
        self.violated_relator(pres).is_none()
    }

    /// Index into [`GroupPresentation::all_relators`] of the first relation
    /// that does not act trivially.
    pub fn violated_relator(&self, pres: &GroupPresentation) -> Option<usize> {
        if self.perms.len() != pres.num_generators {
            return Some(0);
        }
        pres.all_relators()
            .iter()
            .position(|r| !self.word_perm(r).is_identity())
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut order = vec![point];
        let mut queue = VecDeque::from([point]);
        while let Some(i) = queue.pop_front() {
            for p in &self.perms {
                for j in [p.apply(i), p.inverse().apply(i)] {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        order.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        order
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// The permutation commuting with every generator that sends 0 to `target`,
    /// if one exists.
    pub fn deck_transformation(&self, target: u32) -> Option<Permutation> {
        let n = self.degree;
        let mut tau = vec![u32::MAX; n];
        tau[0] = target;
        let mut queue = VecDeque::from([0u32]);
        let invs: Vec<Permutation> = self.perms.iter().map(Permutation::inverse).collect();
        while let Some(i) = queue.pop_front() {
            let ti = tau[i as usize];
            for (p, q) in self.perms.iter().zip(&invs) {
                for (a, b) in [(p.apply(i), p.apply(ti)), (q.apply(i), q.apply(ti))] {
                    match tau[a as usize] {
                        u32::MAX => {
                            tau[a as usize] = b;
                            queue.push_back(a);
                        }
                        x if x != b => return None,
                        _ => {}
                    }
                }
            }
        }
        if tau.contains(&u32::MAX) {
            return None;
        }
        Permutation::from_images(tau).ok()
    }

    /// Transitive with every point stabilizer equal (the image acts freely).
    pub fn is_regular(&self) -> bool {
        self.is_transitive()
            && (0..self.degree as u32).all(|p| self.deck_transformation(p).is_some())
    }

    /// Order of the generated permutation group, or `CapExceeded` once more
    /// than `cap` elements have been found.
    pub fn image_order(&self, cap: usize) -> Result<usize, CoverError> {
        Ok(super::regular::image_elements(self, cap)?.len())
    }
}

impl fmt::Display for PermutationRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}:", self.degree)?;
        for (g, p) in self.perms.iter().enumerate() {
            write!(f, " g{g}={p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Permutation::parse_cycles("(1 3 2)(4 5)", 6).unwrap();
        assert_eq!(p.images(), &[2, 0, 1, 4, 3, 5]);
        assert_eq!(p.to_string(), "(1 3 2)(4 5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert!(Permutation::parse_cycles("(1 1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert_eq!(p.then(&p.inverse()), Permutation::identity(6));
    }

    #[test]
    fn regularity() {
        // S3 acting on 3 points: transitive, not regular; Z/3: regular
        let s3 = PermutationRep::parse(3, &["(1 2)".into(), "(1 2 3)".into()]).unwrap();
        assert!(s3.is_transitive() && !s3.is_regular());
        assert_eq!(s3.image_order(100).unwrap(), 6);
        let z3 = PermutationRep::parse(3, &["(1 2 3)".into(), "()".into()]).unwrap();
        assert!(z3.is_regular());
        assert_eq!(z3.deck_transformation(1).unwrap().to_string(), "(1 2 3)");
        let split = PermutationRep::parse(4, &["(1 2)".into(), "(3 4)".into()]).unwrap();
        assert!(!split.is_transitive());
    }
}
