//! Exact linear algebra over `BigRational`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::RationalPoint;

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of the square system `a x = b`, if `a` is nonsingular.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn determinant(m: &Matrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    det
}

/// Dimension of the affine hull of `points`.
pub fn affine_dimension(points: &[RationalPoint]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Matrix = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    rank(&rows)
}

/// The affine hyperplane `⟨normal, x⟩ = offset` through `points`, if their
/// affine hull is exactly a hyperplane of the ambient space.
pub fn hyperplane_through(points: &[RationalPoint]) -> Option<(Vec<BigRational>, BigRational)> {
    let n = points.first()?.dim();
    let rows: Matrix = points
        .iter()
        .map(|p| {
            let mut r = p.0.clone();
            r.push(-BigRational::one());
            r
        })
        .collect();
    let ns = nullspace(&rows, n + 1);
    if ns.len() != 1 {
        return None;
    }
    let mut v = ns.into_iter().next().unwrap();
    let offset = v.pop().unwrap();
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    Some((v, offset))
}

/// Minimum of `|x|^2` over the affine hull of affinely independent points,
/// with the barycentric coordinates of the minimizer.
pub fn min_norm_affine(points: &[RationalPoint]) -> Option<(BigRational, Vec<BigRational>)> {
    let p0 = &points[0];
    let dirs: Vec<RationalPoint> = points[1..].iter().map(|p| p.sub(p0)).collect();
    let k = dirs.len();
    let gram: Matrix = (0..k)
        .map(|i| (0..k).map(|j| dirs[i].dot(&dirs[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = dirs.iter().map(|d| -d.dot(p0)).collect();
    let t = if k == 0 { Vec::new() } else { solve(&gram, &rhs)? };
    let mut x = p0.clone();
    for (ti, d) in t.iter().zip(&dirs) {
        x = x.add(&d.scale(ti));
    }
    let mut bary = vec![BigRational::one() - t.iter().fold(BigRational::zero(), |a, b| a + b)];
    bary.extend(t);
    Some((x.norm_sq(), bary))
}

/// Exact minimum of `|x|^2` over the simplex spanned by affinely independent
/// points: the smallest value over sub-simplices whose affine minimizer lies
/// in the closed sub-simplex.
pub fn min_norm_simplex(points: &[RationalPoint]) -> BigRational {
    let k = points.len();
    let mut best: Option<BigRational> = None;
    for mask in 1u32..(1 << k) {
        let sub: Vec<RationalPoint> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| points[i].clone())
            .collect();
        if let Some((val, bary)) = min_norm_affine(&sub) {
            if bary.iter().all(|b| *b >= BigRational::zero())
                && best.as_ref().is_none_or(|b| val < *b)
            {
                best = Some(val);
            }
        }
    }
    best.expect("vertices are always candidates")
}
