//! Independent oracles and fixture generators shared by the integration tests.
//! Nothing here calls the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use virtri::complex::{ComplexSpec, FacetRef, PairingSpec, PolyhedronSpec};
use virtri::covers::PermutationRep;
use virtri::geometry::RationalPoint;
use virtri::presentation::{GroupPresentation, Word};
use virtri::{BoundaryMode, PolyhedralComplex, VertexTag};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Random convex polytopes with integer vertices in convex position.

/// Integer points with squared norm `n_sq`.
pub fn lattice_sphere(dim: usize, n_sq: i64) -> Vec<Vec<i64>> {
    let r = (n_sq as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let mut p = vec![-r; dim];
    loop {
        if p.iter().map(|x| x * x).sum::<i64>() == n_sq {
            out.push(p.clone());
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            p[i] += 1;
            if p[i] <= r {
                break;
            }
            p[i] = -r;
            i += 1;
        }
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normal(pts: &[&[i64]]) -> Vec<i64> {
    match pts.len() {
        2 => {
            let d = sub(pts[1], pts[0]);
            vec![-d[1], d[0]]
        }
        3 => {
            let u = sub(pts[1], pts[0]);
            let v = sub(pts[2], pts[0]);
            vec![
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        }
        _ => unreachable!(),
    }
}

/// Facets of the convex hull of points in convex position, by brute force
/// over all `dim`-subsets. `None` if the points are not full-dimensional.
pub fn hull_facets(dim: usize, pts: &[Vec<i64>]) -> Option<Vec<Vec<usize>>> {
    let n = pts.len();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let chosen: Vec<&[i64]> = idx.iter().map(|&i| pts[i].as_slice()).collect();
        let nrm = normal(&chosen);
        if nrm.iter().any(|&x| x != 0) {
            let side: Vec<i64> = (0..n).map(|l| dot(&nrm, &sub(&pts[l], chosen[0]))).collect();
            let pos = side.iter().any(|&s| s > 0);
            let neg = side.iter().any(|&s| s < 0);
            if pos != neg {
                facets.insert((0..n).filter(|&l| side[l] == 0).collect());
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                let f: Vec<Vec<usize>> = facets.into_iter().collect();
                return (f.len() > dim).then_some(f);
            }
            i -= 1;
            if idx[i] < n - dim + i {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomPolytope {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    pub facets: Vec<Vec<usize>>,
}

/// A random polytope with `dim + 1..=max_vertices` vertices drawn from
/// integer points on a sphere, so every point is a vertex.
pub fn random_polytope<R: Rng>(rng: &mut R, dim: usize, max_vertices: usize) -> RandomPolytope {
    let spheres: &[i64] = if dim == 2 { &[25, 50, 65] } else { &[2, 3, 9, 50] };
    random_polytope_on(rng, dim, max_vertices, spheres)
}

/// As [`random_polytope`], on a sphere of squared radius from `spheres`.
pub fn random_polytope_on<R: Rng>(rng: &mut R, dim: usize, max_vertices: usize, spheres: &[i64]) -> RandomPolytope {
    loop {
        let n_sq = spheres[rng.random_range(0..spheres.len())];
        let mut all = lattice_sphere(dim, n_sq);
        all.shuffle(rng);
        let lo = dim + 1;
        let hi = max_vertices.min(all.len());
        let k = rng.random_range(lo..=hi);
        let points: Vec<Vec<i64>> = all.into_iter().take(k).collect();
        if let Some(facets) = hull_facets(dim, &points) {
            return RandomPolytope { dim, points, facets };
        }
    }
}

/// Two copies of `p`; the second has its vertex ids permuted by `relabel`
/// (`relabel[v]` is the new id of `v`) and is glued to the first along every
/// facet. Vertex tags come from `tags`.
pub fn double(p: &RandomPolytope, relabel: &[usize], tags: &[VertexTag]) -> PolyhedralComplex {
    let n = p.points.len();
    let labels: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let first = PolyhedronSpec {
        dim: p.dim,
        labels: labels.clone(),
        tags: tags.to_vec(),
        coords: None,
        facets: p.facets.clone(),
    };
    let mut inv = vec![0; n];
    for (v, &r) in relabel.iter().enumerate() {
        inv[r] = v;
    }
    let second = PolyhedronSpec {
        dim: p.dim,
        labels: (0..n).map(|r| labels[inv[r]].clone()).collect(),
        tags: (0..n).map(|r| tags[inv[r]]).collect(),
        coords: None,
        facets: p
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| relabel[v]).collect())
            .collect(),
    };
    let pairings = p
        .facets
        .iter()
        .enumerate()
        .map(|(i, f)| PairingSpec {
            source: FacetRef { polyhedron: 0, facet: i },
            target: FacetRef { polyhedron: 1, facet: i },
            map: f.iter().map(|&v| (v, relabel[v])).collect(),
        })
        .collect();
    let spec = ComplexSpec {
        polyhedra: vec![first, second],
        pairings,
    };
    PolyhedralComplex::new(spec, BoundaryMode::Closed).expect("double is a valid complex")
}

/// Prism over a random polygon (at most `max_base` sides) inscribed in
/// `x^2 + y^2 = 25`.
pub fn random_prism<R: Rng>(rng: &mut R, max_base: usize) -> RandomPolytope {
    let poly = random_polytope_on(rng, 2, max_base, &[25]).points;
    let mut points: Vec<Vec<i64>> = poly.iter().map(|p| vec![p[0], p[1], 0]).collect();
    points.extend(poly.iter().map(|p| vec![p[0], p[1], 2]));
    let facets = hull_facets(3, &points).expect("prism is full-dimensional");
    RandomPolytope { dim: 3, points, facets }
}

/// Pyramid over a random polygon inscribed in `x^2 + y^2 = 25`.
pub fn random_pyramid<R: Rng>(rng: &mut R, max_base: usize) -> RandomPolytope {
    let base = random_polytope_on(rng, 2, max_base, &[25]);
    let mut points: Vec<Vec<i64>> = base.points.iter().map(|p| vec![p[0], p[1], 0]).collect();
    points.push(vec![1, 0, 3]);
    let facets = hull_facets(3, &points).expect("pyramid is full-dimensional");
    RandomPolytope { dim: 3, points, facets }
}

// ---------------------------------------------------------------------------
// Naive recursive pulling.

/// Facets of a face given as a vertex set, inside a parent whose facets are
/// `parent_facets`: the maximal proper intersections.
pub fn sub_facets(face: &[usize], parent_facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let set: HashSet<usize> = face.iter().copied().collect();
    let mut cands: Vec<Vec<usize>> = parent_facets
        .iter()
        .map(|g| {
            let mut x: Vec<usize> = g.iter().copied().filter(|v| set.contains(v)).collect();
            x.sort_unstable();
            x
        })
        .filter(|x| !x.is_empty() && x.len() < face.len())
        .collect();
    cands.sort();
    cands.dedup();
    let maximal: Vec<Vec<usize>> = cands
        .iter()
        .filter(|a| !cands.iter().any(|b| b.len() > a.len() && a.iter().all(|v| b.contains(v))))
        .cloned()
        .collect();
    maximal
}

/// Pulling triangulation by the textbook recursion: cone the first vertex
/// over the triangulations of the facets that miss it. Returns sorted vertex
/// sets.
pub fn naive_pull(dim: usize, vertices: &[usize], facets: &[Vec<usize>], rank: &dyn Fn(usize) -> usize) -> Vec<Vec<usize>> {
    if vertices.len() == dim + 1 {
        let mut s = vertices.to_vec();
        s.sort_unstable();
        return vec![s];
    }
    let apex = *vertices.iter().min_by_key(|&&v| rank(v)).expect("nonempty");
    let mut out = Vec::new();
    for f in facets.iter().filter(|f| !f.contains(&apex)) {
        let ff = sub_facets(f, facets);
        for mut s in naive_pull(dim - 1, f, &ff, rank) {
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Smith normal form of an integer matrix.

/// Nonzero invariant factors (absolute values) of `m`.
pub fn smith_invariants(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                for j in t..cols {
                    m[i][j] -= f * m[t][j];
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                for i in t..rows {
                    m[i][j] -= f * m[i][t];
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility: fold a non-multiple into the pivot row
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // restart with a smaller pivot
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Dimension over F2 of `H1 ⊗ F2` for the presentation (relators plus tree
/// generators).
pub fn h1_mod2_rank(pres: &GroupPresentation) -> usize {
    let n = pres.num_generators;
    let rows: Vec<Vec<i64>> = pres
        .all_relators()
        .iter()
        .map(|r| r.exponent_sums(n))
        .collect();
    let inv = smith_invariants(if rows.is_empty() { vec![vec![0; n]] } else { rows });
    let free = n - inv.len();
    free + inv.iter().filter(|&&d| d % 2 == 0).count()
}

// ---------------------------------------------------------------------------
// Cover oracles.

pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Vertex instances of the cover of `base` for `rep`, unioned directly from
/// the base gluing maps. Returns the class of `(copy, polyhedron, vertex)`.
pub fn cover_vertex_classes(base: &PolyhedralComplex, rep: &PermutationRep) -> HashMap<(usize, usize, usize), usize> {
    let d = rep.degree();
    let sizes: Vec<usize> = base.polyhedra().iter().map(|p| p.num_vertices()).collect();
    let mut id = HashMap::new();
    for i in 0..d {
        for (p, &s) in sizes.iter().enumerate() {
            for v in 0..s {
                let n = id.len();
                id.insert((i, p, v), n);
            }
        }
    }
    let mut dsu = Dsu::new(id.len());
    for (k, pr) in base.pairings().iter().enumerate() {
        for i in 0..d {
            let j = rep.perms()[k].images()[i] as usize;
            for &(a, b) in &pr.vertex_map {
                dsu.union(id[&(i, pr.source.polyhedron, a)], id[&(j, pr.target.polyhedron, b)]);
            }
        }
    }
    id.iter().map(|(&key, &n)| (key, dsu.find(n))).collect()
}

pub fn num_classes(classes: &HashMap<(usize, usize, usize), usize>) -> usize {
    classes.values().collect::<HashSet<_>>().len()
}

/// Applies a word to point 0 letter by letter using only the generator images.
pub fn act(rep: &PermutationRep, word: &Word) -> usize {
    let mut i = 0usize;
    for l in word.letters() {
        let img = rep.perms()[l.generator].images();
        i = if l.inverse {
            img.iter().position(|&x| x as usize == i).unwrap()
        } else {
            img[i] as usize
        };
    }
    i
}

/// Every relator fixes every point.
pub fn relators_hold(rep: &PermutationRep, pres: &GroupPresentation) -> bool {
    pres.all_relators().iter().all(|r| {
        (0..rep.degree()).all(|start| {
            let mut i = start;
            for l in r.letters() {
                let img = rep.perms()[l.generator].images();
                i = if l.inverse {
                    img.iter().position(|&x| x as usize == i).unwrap()
                } else {
                    img[i] as usize
                };
            }
            i == start
        })
    })
}

// ---------------------------------------------------------------------------
// Exact geometry oracles.

/// A rational point on the unit sphere via inverse stereographic projection
/// of `(s, t)`.
pub fn sphere_point(s: &BigRational, t: &BigRational) -> RationalPoint {
    let one = BigRational::one();
    let two = &one + &one;
    let n = s * s + t * t;
    let den = &n + &one;
    RationalPoint::new(vec![&two * s / &den, &two * t / &den, (&n - &one) / &den])
}

pub fn random_rational<R: Rng>(rng: &mut R, range: i64, den: i64) -> BigRational {
    q(rng.random_range(-range..=range), rng.random_range(1..=den))
}

/// `x + s·u` with `u ⟂ x`, `u ≠ 0`: hyperideal and tangent to the sphere at
/// `x` (so `x` lies on its truncation plane).
pub fn tangent_hyperideal<R: Rng>(rng: &mut R, x: &RationalPoint, s: &BigRational) -> RationalPoint {
    loop {
        let w = RationalPoint::new((0..3).map(|_| random_rational(rng, 5, 3)).collect());
        let u = w.sub(&x.scale(&(w.dot(x) / x.norm_sq())));
        if !u.norm_sq().is_zero() {
            return x.add(&u.scale(s));
        }
    }
}

pub fn det2(a: &RationalPoint, b: &RationalPoint) -> BigRational {
    let (a, b) = (a.coords(), b.coords());
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub fn det3(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint) -> BigRational {
    let (a, b, c) = (a.coords(), b.coords(), c.coords());
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn centroid(points: &[RationalPoint], ids: &[usize]) -> RationalPoint {
    let dim = points[0].dim();
    let mut sum = RationalPoint::new(vec![BigRational::zero(); dim]);
    for &i in ids {
        sum = sum.add(&points[i]);
    }
    sum.scale(&q(1, ids.len() as i64))
}

/// Volume of a convex polygon or 3-polytope by coning from the centroid:
/// triangles over edges in dim 2; in dim 3, tetrahedra from the centroid,
/// each facet's centroid and each facet edge.
pub fn pyramid_volume(points: &[RationalPoint], facets: &[Vec<usize>]) -> BigRational {
    let all: Vec<usize> = (0..points.len()).collect();
    let c = centroid(points, &all);
    let mut total = BigRational::zero();
    for f in facets {
        if points[0].dim() == 2 {
            total += det2(&points[f[0]].sub(&c), &points[f[1]].sub(&c)).abs() / q(2, 1);
        } else {
            let cf = centroid(points, f).sub(&c);
            for e in sub_facets(f, facets) {
                total += det3(&cf, &points[e[0]].sub(&c), &points[e[1]].sub(&c)).abs() / q(6, 1);
            }
        }
    }
    total
}

/// `min |a + t(b - a)|^2` over `t ∈ [0, 1]`, in closed form.
pub fn segment_min_norm_sq(a: &RationalPoint, b: &RationalPoint) -> BigRational {
    let d = b.sub(a);
    let dd = d.norm_sq();
    let mut t = -a.dot(&d) / &dd;
    if t.is_negative() {
        t = BigRational::zero();
    }
    if t > BigRational::one() {
        t = BigRational::one();
    }
    a.add(&d.scale(&t)).norm_sq()
}
