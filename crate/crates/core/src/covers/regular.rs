//! Regular representations of permutation images and their products.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::{Permutation, PermutationRep};
use super::CoverError;
use crate::presentation::{GroupPresentation, Letter, Word};

/// Elements of the image in BFS order from the identity, multiplying by
/// generators on the right in generator order.
pub(crate) fn image_elements(rep: &PermutationRep, cap: usize) -> Result<Vec<Permutation>, CoverError> {
    let (elements, _) = closure(rep, cap)?;
    Ok(elements)
}

/// Elements plus the right-multiplication table `table[e][g] = e * g`.
fn closure(rep: &PermutationRep, cap: usize) -> Result<(Vec<Permutation>, Vec<Vec<u32>>), CoverError> {
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    let mut elements = vec![Permutation::identity(rep.degree())];
    index.insert(elements[0].clone(), 0);
    let mut table: Vec<Vec<u32>> = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        let mut row = Vec::with_capacity(rep.num_generators());
        for g in rep.perms() {
            let prod = elements[next].then(g);
            let id = match index.get(&prod) {
                Some(&id) => id,
                None => {
                    if elements.len() == cap {
                        return Err(CoverError::CapExceeded {
                            at_least: elements.len() + 1,
                            cap,
                        });
                    }
                    let id = elements.len() as u32;
                    index.insert(prod.clone(), id);
                    elements.push(prod);
                    id
                }
            };
            row.push(id);
        }
        table.push(row);
        next += 1;
    }
    Ok((elements, table))
}

/// The image acting on itself by right multiplication; point 1 is the identity.
/// Fails if the image has more than `cap` elements. The result is checked to
/// factor through `rep` on sample words.
pub fn regularize(rep: &PermutationRep, cap: usize) -> Result<PermutationRep, CoverError> {
    if !rep.is_transitive() {
        return Err(CoverError::NotTransitive);
    }
    let (elements, table) = closure(rep, cap)?;
    let n = elements.len();
    let perms = (0..rep.num_generators())
        .map(|g| Permutation::from_images((0..n).map(|e| table[e][g]).collect()).expect("group table"))
        .collect();
    let reg = PermutationRep::new(n, perms)?;
    check_factors(&reg, rep)?;
    Ok(reg)
}

/// Diagonal action on tuples of points, one coordinate per input, restricted
/// to the orbit of `(0, ..., 0)` and regularized.
pub fn common_cover(reps: &[PermutationRep], cap: usize) -> Result<PermutationRep, CoverError> {
    let first = reps.first().ok_or(CoverError::Empty)?;
    let ngen = first.num_generators();
    if reps.iter().any(|r| r.num_generators() != ngen) {
        return Err(CoverError::MixedGenerators);
    }
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut points = vec![vec![0u32; reps.len()]];
    index.insert(points[0].clone(), 0);
    let mut images: Vec<Vec<u32>> = vec![Vec::new(); ngen];
    let mut next = 0;
    while next < points.len() {
        for (g, img) in images.iter_mut().enumerate() {
            let to: Vec<u32> = points[next]
                .iter()
                .zip(reps)
                .map(|(&i, r)| r.perm(g).apply(i))
                .collect();
            let id = match index.get(&to) {
                Some(&id) => id,
                None => {
                    if points.len() == cap {
                        return Err(CoverError::CapExceeded {
                            at_least: points.len() + 1,
                            cap,
                        });
                    }
                    let id = points.len() as u32;
                    index.insert(to.clone(), id);
                    points.push(to);
                    id
                }
            };
            img.push(id);
        }
        next += 1;
    }
    let perms = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<_, _>>()?;
    let orbit = PermutationRep::new(points.len(), perms)?;
    let reg = regularize(&orbit, cap)?;
    for r in reps {
        check_factors(&reg, r)?;
    }
    Ok(reg)
}

/// Deterministic sample of reduced words: 100 random words of length up to
/// 12 from a fixed seed.
pub fn sample_words(num_generators: usize) -> Vec<Word> {
    if num_generators == 0 {
        return vec![Word::default()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..100)
        .map(|_| {
            let len = rng.random_range(1..=12);
            let letters = (0..len)
                .map(|_| Letter {
                    generator: rng.random_range(0..num_generators),
                    inverse: rng.random_bool(0.5),
                })
                .collect();
            Word(letters).freely_reduced()
        })
        .collect()
}

/// Checks that every sample word fixing point 1 of `cover` fixes point 1 of
/// `base`. Powers `w^m` with `m` the order of `w` in `cover` are included so
/// that the check is not vacuous.
pub fn check_factors(cover: &PermutationRep, base: &PermutationRep) -> Result<(), CoverError> {
    if cover.num_generators() != base.num_generators() {
        return Err(CoverError::MixedGenerators);
    }
    for w in sample_words(cover.num_generators()) {
        let p = cover.word_perm(&w);
        let m = order(&p);
        for word in [w.clone(), w.pow(m)] {
            if cover.apply_word(0, &word) == 0 && base.apply_word(0, &word) != 0 {
                return Err(CoverError::NotFactoring { word: word.to_string() });
            }
        }
    }
    Ok(())
}

fn order(p: &Permutation) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    p.cycles()
        .iter()
        .fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
}

/// Checks a rep against the presentation; tree generators must act trivially.
pub fn verify_rep(rep: &PermutationRep, pres: &GroupPresentation) -> Result<(), CoverError> {
    if rep.num_generators() != pres.num_generators {
        return Err(CoverError::GeneratorCount {
            expected: pres.num_generators,
            found: rep.num_generators(),
        });
    }
    match rep.violated_relator(pres) {
        Some(relator) => Err(CoverError::RelatorViolated { relator }),
        None => Ok(()),
    }
}
