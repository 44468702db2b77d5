use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::linalg::{determinant, Matrix};
use super::{ConvexPolytope, GeometryError, RationalPoint};
use crate::lattice::is_subset;

/// A straight simplex on vertices of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricSimplex {
    pub vertices: Vec<usize>,
    pub points: Vec<RationalPoint>,
    pub signed_volume: BigRational,
}

/// Exact volume bookkeeping for a subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub simplices: Vec<GeometricSimplex>,
    /// Sum of absolute simplex volumes.
    pub total_volume: BigRational,
    pub polytope_volume: BigRational,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// `det(p_1 - p_0, ..., p_n - p_0) / n!`.
pub fn signed_volume(points: &[RationalPoint]) -> BigRational {
    let n = points.len() - 1;
    let m: Matrix = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    determinant(&m) / BigRational::from_integer(factorial(n))
}

impl ConvexPolytope {
    /// Exact volume from the flag decomposition: each maximal chain of faces
    /// contributes the simplex on the centroids of its faces.
    pub fn volume(&self) -> BigRational {
        let lattice = self.lattice();
        let n = lattice.dim();
        let centroid = |face: &[usize]| {
            RationalPoint::centroid(face.iter().map(|&v| self.point(v)))
        };
        let mut total = BigRational::zero();
        let top = lattice.faces(n)[0].clone();
        let mut stack: Vec<(Vec<usize>, Vec<RationalPoint>)> = vec![(top.clone(), vec![centroid(&top)])];
        while let Some((face, chain)) = stack.pop() {
            let rank = n + 1 - chain.len();
            if rank == 0 {
                total += signed_volume(&chain).abs();
                continue;
            }
            for sub in lattice.faces(rank - 1) {
                if is_subset(sub, &face) {
                    let mut c = chain.clone();
                    c.push(centroid(sub));
                    stack.push((sub.clone(), c));
                }
            }
        }
        total
    }
}

/// Realizes `simplices` (tuples of vertex ids) as straight simplices and
/// checks that their volumes add up to the polytope's.
pub fn realize_subdivision(
    polytope: &ConvexPolytope,
    simplices: &[Vec<usize>],
) -> Result<Realization, GeometryError> {
    let n = polytope.dim();
    let mut out = Vec::with_capacity(simplices.len());
    let mut total = BigRational::zero();
    for (i, s) in simplices.iter().enumerate() {
        if s.len() != n + 1 {
            return Err(GeometryError::SimplexArity {
                index: i,
                found: s.len(),
                expected: n + 1,
            });
        }
        if let Some(&v) = s.iter().find(|&&v| v >= polytope.points().len()) {
            return Err(GeometryError::ForeignVertex { index: i, vertex: v });
        }
        let points: Vec<RationalPoint> = s.iter().map(|&v| polytope.point(v).clone()).collect();
        let vol = signed_volume(&points);
        if vol.is_zero() {
            return Err(GeometryError::DegenerateSimplex { index: i });
        }
        total += vol.abs();
        out.push(GeometricSimplex {
            vertices: s.clone(),
            points,
            signed_volume: vol,
        });
    }
    let expected = polytope.volume();
    if total != expected {
        return Err(GeometryError::VolumeMismatch {
            expected: super::format_fraction(&expected),
            found: super::format_fraction(&total),
        });
    }
    Ok(Realization {
        simplices: out,
        total_volume: total,
        polytope_volume: expected,
    })
}
