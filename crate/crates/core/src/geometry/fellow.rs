use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg::{hyperplane_through, min_norm_simplex, solve};
use super::{GeometryError, RationalPoint};
use crate::complex::{Polyhedron, VertexTag};
use crate::lattice::{Face, FaceLattice};
use crate::pulling::cone_cells;

/// Closed half-space `⟨normal, x⟩ <= offset`; the polytope interior is strict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Halfspace {
    /// `⟨normal, x⟩ - offset`: negative inside, zero on the boundary plane.
    pub fn eval(&self, x: &RationalPoint) -> BigRational {
        x.0.iter()
            .zip(&self.normal)
            .fold(BigRational::zero(), |s, (a, b)| s + a * b)
            - &self.offset
    }

    /// The pole `a` with plane `{x : ⟨x, a⟩ = 1}`; `None` when the plane
    /// passes through the origin.
    pub fn pole(&self) -> Option<RationalPoint> {
        if self.offset.is_zero() {
            return None;
        }
        Some(RationalPoint(
            self.normal.iter().map(|n| n / &self.offset).collect(),
        ))
    }
}

/// A full-dimensional convex polytope with exact vertex coordinates whose
/// combinatorics match its face lattice.
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    lattice: FaceLattice,
    points: Vec<RationalPoint>,
    facets: Vec<Halfspace>,
}

/// Problems found when matching coordinates against a face lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexityViolation {
    /// The facet's vertices do not span a hyperplane.
    NonFlatFacet { facet: usize },
    /// A vertex outside the facet is not strictly on the inner side of its plane.
    NotSupporting { facet: usize, vertex: usize },
}

impl ConvexPolytope {
    pub fn new(lattice: FaceLattice, points: Vec<RationalPoint>) -> Result<Self, GeometryError> {
        check_points(&lattice, &points)?;
        match facet_halfspaces(&lattice, &points) {
            Ok(facets) => Ok(Self {
                lattice,
                points,
                facets,
            }),
            Err(v) => Err(GeometryError::NotConvex(v)),
        }
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &RationalPoint {
        &self.points[v]
    }

    pub fn facet_halfspace(&self, facet: usize) -> &Halfspace {
        &self.facets[facet]
    }

    pub fn centroid(&self) -> RationalPoint {
        RationalPoint::centroid(&self.points)
    }

    /// Exact minimum of `|x|^2` over a face, by splitting the face into
    /// simplices and minimizing over each.
    pub fn min_norm_sq(&self, rank: usize, face: &[usize]) -> BigRational {
        let simplices: Vec<Vec<usize>> = if rank == 0 || face.len() == rank + 1 {
            vec![face.to_vec()]
        } else {
            let (sub, local) = self.lattice.face_lattice(rank, face);
            let order: Vec<usize> = (0..sub.num_vertices()).collect();
            cone_cells(&sub, &order)
                .into_iter()
                .map(|s| s.into_iter().map(|i| local[i]).collect())
                .collect()
        };
        simplices
            .iter()
            .map(|s| {
                let pts: Vec<RationalPoint> = s.iter().map(|&v| self.points[v].clone()).collect();
                min_norm_simplex(&pts)
            })
            .min()
            .expect("faces are nonempty")
    }
}

fn check_points(lattice: &FaceLattice, points: &[RationalPoint]) -> Result<(), GeometryError> {
    if points.len() != lattice.num_vertices() {
        return Err(GeometryError::CoordinateCount {
            points: points.len(),
            vertices: lattice.num_vertices(),
        });
    }
    if let Some((v, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != lattice.dim()) {
        return Err(GeometryError::DimensionMismatch {
            vertex: v,
            found: p.dim(),
            expected: lattice.dim(),
        });
    }
    Ok(())
}

fn facet_halfspaces(
    lattice: &FaceLattice,
    points: &[RationalPoint],
) -> Result<Vec<Halfspace>, Vec<ConvexityViolation>> {
    let inner = RationalPoint::centroid(points);
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for (f, facet) in lattice.facets().iter().enumerate() {
        let pts: Vec<RationalPoint> = facet.iter().map(|&v| points[v].clone()).collect();
        let Some((normal, offset)) = hyperplane_through(&pts) else {
            bad.push(ConvexityViolation::NonFlatFacet { facet: f });
            continue;
        };
        let mut h = Halfspace { normal, offset };
        if h.eval(&inner) > BigRational::zero() {
            h.normal.iter_mut().for_each(|x| *x = -x.clone());
            h.offset = -h.offset;
        }
        for v in 0..points.len() {
            if facet.binary_search(&v).is_err() && h.eval(&points[v]) >= BigRational::zero() {
                bad.push(ConvexityViolation::NotSupporting { facet: f, vertex: v });
            }
        }
        out.push(h);
    }
    if bad.is_empty() {
        Ok(out)
    } else {
        Err(bad)
    }
}

/// The truncation hyperplane `H(v) = {x : ⟨x, v⟩ = 1}` of a hyperideal point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationPlane {
    pole: RationalPoint,
}

impl TruncationPlane {
    pub fn pole(&self) -> &RationalPoint {
        &self.pole
    }

    /// `⟨x, v⟩ - 1`.
    pub fn eval(&self, x: &RationalPoint) -> BigRational {
        x.dot(&self.pole) - BigRational::one()
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        self.eval(x).is_zero()
    }

    /// The origin and the pole lie strictly on opposite sides.
    pub fn separates_pole_from_origin(&self) -> bool {
        let origin = RationalPoint::origin(self.pole.dim());
        self.eval(&origin) < BigRational::zero() && self.eval(&self.pole) > BigRational::zero()
    }

    /// `⟨x - v, x⟩`, which vanishes exactly when the segment from `v` to a point
    /// `x` of the unit sphere is tangent to the sphere at `x`.
    pub fn tangency_defect(&self, x: &RationalPoint) -> BigRational {
        x.sub(&self.pole).dot(x)
    }
}

pub fn truncation_plane(v: &RationalPoint) -> Result<TruncationPlane, GeometryError> {
    let n = v.norm_sq();
    if n <= BigRational::one() {
        return Err(GeometryError::NotHyperideal {
            norm_sq: super::format_fraction(&n),
        });
    }
    Ok(TruncationPlane { pole: v.clone() })
}

/// The truncation face at a hyperideal vertex, kept as the set of planes
/// cutting it out: `H(v)` together with the lateral facets through `v`.
#[derive(Clone, Debug)]
pub struct TruncationFace {
    pub vertex: usize,
    pub plane: TruncationPlane,
    pub lateral_facets: Vec<usize>,
}

/// The four defining conditions of a Euclidean fellow, plus convexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FellowCondition {
    Convexity,
    Tagged,
    IdealOnSphere,
    HyperidealOutsideBall,
    Codim2MeetsBall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FellowViolation {
    Coordinates(String),
    Convexity(ConvexityViolation),
    UntaggedVertex { vertex: usize },
    IdealOffSphere { vertex: usize, norm_sq: BigRational },
    HyperidealInsideBall { vertex: usize, norm_sq: BigRational },
    FaceMissesBall { face: Face, min_norm_sq: BigRational },
}

impl FellowViolation {
    pub fn condition(&self) -> FellowCondition {
        match self {
            FellowViolation::Coordinates(_) | FellowViolation::Convexity(_) => {
                FellowCondition::Convexity
            }
            FellowViolation::UntaggedVertex { .. } => FellowCondition::Tagged,
            FellowViolation::IdealOffSphere { .. } => FellowCondition::IdealOnSphere,
            FellowViolation::HyperidealInsideBall { .. } => FellowCondition::HyperidealOutsideBall,
            FellowViolation::FaceMissesBall { .. } => FellowCondition::Codim2MeetsBall,
        }
    }
}

impl fmt::Display for FellowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::format_fraction as q;
        match self {
            FellowViolation::Coordinates(d) => write!(f, "coordinates: {d}"),
            FellowViolation::Convexity(ConvexityViolation::NonFlatFacet { facet }) => {
                write!(f, "facet {facet} is not flat")
            }
            FellowViolation::Convexity(ConvexityViolation::NotSupporting { facet, vertex }) => {
                write!(f, "vertex {vertex} is not strictly inside facet {facet}'s half-space")
            }
            FellowViolation::UntaggedVertex { vertex } => write!(f, "vertex {vertex} has no tag"),
            FellowViolation::IdealOffSphere { vertex, norm_sq } => {
                write!(f, "ideal vertex {vertex} has |v|^2 = {}", q(norm_sq))
            }
            FellowViolation::HyperidealInsideBall { vertex, norm_sq } => {
                write!(f, "hyperideal vertex {vertex} has |v|^2 = {}", q(norm_sq))
            }
            FellowViolation::FaceMissesBall { face, min_norm_sq } => write!(
                f,
                "codimension-2 face {face:?} misses the closed ball (min |x|^2 = {})",
                q(min_norm_sq)
            ),
        }
    }
}

/// Two truncation planes of one polytope meeting inside the open ball. Reported
/// as a warning: the open stars to be removed might then overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationOverlap {
    pub first: usize,
    pub second: usize,
    /// `|x|^2` at the point of `H(v) ∩ H(w)` closest to the origin.
    pub min_norm_sq: BigRational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FellowReport {
    pub violations: Vec<FellowViolation>,
    pub warnings: Vec<TruncationOverlap>,
    /// Codimension-2 faces checked, with their exact minimum of `|x|^2`.
    pub codim2_minima: Vec<(Face, BigRational)>,
}

impl FellowReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, condition: FellowCondition) -> bool {
        self.violations.iter().all(|v| v.condition() != condition)
    }
}

impl fmt::Display for FellowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, name) in [
            (FellowCondition::Convexity, "convex"),
            (FellowCondition::Tagged, "(1) tagged"),
            (FellowCondition::IdealOnSphere, "(2) ideal on sphere"),
            (FellowCondition::HyperidealOutsideBall, "(3) hyperideal outside ball"),
            (FellowCondition::Codim2MeetsBall, "(4) codim-2 faces meet ball"),
        ] {
            writeln!(f, "{name}: {}", if self.holds(c) { "ok" } else { "FAILED" })?;
        }
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        for w in &self.warnings {
            writeln!(
                f,
                "  warning: truncation planes of vertices {} and {} meet inside the ball",
                w.first, w.second
            )?;
        }
        Ok(())
    }
}

/// Checks the fellow conditions exactly. Condition (4) applies in dimension
/// at least 3; in dimension 2 the codimension-2 faces are the vertices
/// themselves and hyperideal vertices are allowed.
pub fn validate_fellow(
    lattice: &FaceLattice,
    points: &[RationalPoint],
    tags: &[VertexTag],
) -> FellowReport {
    let mut report = FellowReport::default();
    if let Err(e) = check_points(lattice, points) {
        report.violations.push(FellowViolation::Coordinates(e.to_string()));
        return report;
    }
    for v in tags.len()..lattice.num_vertices() {
        report.violations.push(FellowViolation::UntaggedVertex { vertex: v });
    }
    if let Err(bad) = facet_halfspaces(lattice, points) {
        report
            .violations
            .extend(bad.into_iter().map(FellowViolation::Convexity));
    }
    let one = BigRational::one();
    for (v, (p, tag)) in points.iter().zip(tags).enumerate() {
        let n = p.norm_sq();
        match tag {
            VertexTag::Ideal if n != one => report
                .violations
                .push(FellowViolation::IdealOffSphere { vertex: v, norm_sq: n }),
            VertexTag::Hyperideal if n <= one => report
                .violations
                .push(FellowViolation::HyperidealInsideBall { vertex: v, norm_sq: n }),
            _ => {}
        }
    }
    if !report.holds(FellowCondition::Convexity) {
        return report;
    }
    let polytope = ConvexPolytope {
        lattice: lattice.clone(),
        points: points.to_vec(),
        facets: facet_halfspaces(lattice, points).expect("checked"),
    };
    if lattice.dim() >= 3 {
        let rank = lattice.dim() - 2;
        for face in lattice.faces(rank) {
            let m = polytope.min_norm_sq(rank, face);
            if m > one {
                report.violations.push(FellowViolation::FaceMissesBall {
                    face: face.clone(),
                    min_norm_sq: m.clone(),
                });
            }
            report.codim2_minima.push((face.clone(), m));
        }
    }
    let hyper: Vec<usize> = (0..tags.len().min(points.len()))
        .filter(|&v| tags[v] == VertexTag::Hyperideal)
        .collect();
    for (i, &v) in hyper.iter().enumerate() {
        for &w in &hyper[i + 1..] {
            if let Some(m) = plane_pair_min_norm(&points[v], &points[w]) {
                if m < one {
                    report.warnings.push(TruncationOverlap {
                        first: v,
                        second: w,
                        min_norm_sq: m,
                    });
                }
            }
        }
    }
    report
}

/// `|x|^2` at the point of `{⟨x,v⟩ = 1, ⟨x,w⟩ = 1}` nearest the origin, or
/// `None` if the planes are parallel. That point is `αv + βw` with
/// `G (α, β) = (1, 1)` for the Gram matrix `G`, so `|x|^2 = α + β`.
fn plane_pair_min_norm(v: &RationalPoint, w: &RationalPoint) -> Option<BigRational> {
    let gram = vec![
        vec![v.norm_sq(), v.dot(w)],
        vec![v.dot(w), w.norm_sq()],
    ];
    let ab = solve(&gram, &[BigRational::one(), BigRational::one()])?;
    Some(&ab[0] + &ab[1])
}

/// A validated Euclidean fellow: convex polytope with tagged vertices
/// satisfying all fellow conditions.
#[derive(Clone, Debug)]
pub struct EuclideanFellow {
    polytope: ConvexPolytope,
    tags: Vec<VertexTag>,
    report: FellowReport,
}

impl EuclideanFellow {
    pub fn new(
        lattice: FaceLattice,
        points: Vec<RationalPoint>,
        tags: Vec<VertexTag>,
    ) -> Result<Self, FellowReport> {
        let report = validate_fellow(&lattice, &points, &tags);
        if !report.is_valid() {
            return Err(report);
        }
        let polytope = ConvexPolytope::new(lattice, points).expect("validated");
        Ok(Self {
            polytope,
            tags,
            report,
        })
    }

    pub fn from_polyhedron(p: &Polyhedron) -> Result<Self, FellowReport> {
        match &p.coords {
            Some(c) => Self::new(p.lattice.clone(), c.clone(), p.tags.clone()),
            None => Err(FellowReport {
                violations: vec![FellowViolation::Coordinates("no coordinates".into())],
                ..FellowReport::default()
            }),
        }
    }

    pub fn polytope(&self) -> &ConvexPolytope {
        &self.polytope
    }

    pub fn tags(&self) -> &[VertexTag] {
        &self.tags
    }

    pub fn report(&self) -> &FellowReport {
        &self.report
    }

    pub fn hyperideal_vertices(&self) -> Vec<usize> {
        (0..self.tags.len())
            .filter(|&v| self.tags[v] == VertexTag::Hyperideal)
            .collect()
    }

    pub fn truncation_face(&self, v: usize) -> Option<TruncationFace> {
        if self.tags[v] != VertexTag::Hyperideal {
            return None;
        }
        Some(TruncationFace {
            vertex: v,
            plane: truncation_plane(self.polytope.point(v)).expect("validated hyperideal"),
            lateral_facets: self.polytope.lattice.facets_containing(&[v]),
        })
    }
}

/// One lateral facet through a hyperideal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityCheck {
    pub vertex: usize,
    pub facet: usize,
    /// `⟨v, a⟩ - 1` for the facet pole `a`.
    pub residual: BigRational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub checks: Vec<OrthogonalityCheck>,
    /// `(vertex, facet)` pairs whose facet plane passes through the origin.
    pub degenerate: Vec<(usize, usize)>,
}

impl OrthogonalityReport {
    pub fn all_zero(&self) -> bool {
        self.degenerate.is_empty() && self.checks.iter().all(|c| c.residual.is_zero())
    }
}

/// For each hyperideal vertex `v` and lateral facet plane `{⟨x,a⟩ = 1}`
/// through it, `⟨v, a⟩ - 1`. Zero means `H(v)` and the facet meet at a right
/// angle in the hyperbolic metric.
pub fn check_orthogonality(fellow: &EuclideanFellow) -> OrthogonalityReport {
    let mut report = OrthogonalityReport::default();
    for v in fellow.hyperideal_vertices() {
        let p = fellow.polytope.point(v);
        for f in fellow.polytope.lattice.facets_containing(&[v]) {
            match fellow.polytope.facet_halfspace(f).pole() {
                Some(a) => report.checks.push(OrthogonalityCheck {
                    vertex: v,
                    facet: f,
                    residual: p.dot(&a) - BigRational::one(),
                }),
                None => report.degenerate.push((v, f)),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[&str]]) -> Vec<RationalPoint> {
        rows.iter().map(|r| RationalPoint::parse(r).unwrap()).collect()
    }

    fn octahedron() -> (FaceLattice, Vec<RationalPoint>) {
        let facets = vec![
            vec![0, 2, 4],
            vec![0, 2, 5],
            vec![0, 3, 4],
            vec![0, 3, 5],
            vec![1, 2, 4],
            vec![1, 2, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
        ];
        let lattice = FaceLattice::from_facets(3, 6, &facets).unwrap();
        let p = pts(&[
            &["1", "0", "0"],
            &["-1", "0", "0"],
            &["0", "1", "0"],
            &["0", "-1", "0"],
            &["0", "0", "1"],
            &["0", "0", "-1"],
        ]);
        (lattice, p)
    }

    #[test]
    fn ideal_octahedron_is_a_fellow() {
        let (l, p) = octahedron();
        let f = EuclideanFellow::new(l, p, vec![VertexTag::Ideal; 6]).unwrap();
        assert!(f.report().warnings.is_empty());
        assert_eq!(f.report().codim2_minima.len(), 12);
        let o = check_orthogonality(&f);
        assert!(o.checks.is_empty() && o.all_zero());
    }

    #[test]
    fn hyperideal_triangle() {
        let l = FaceLattice::from_facets(2, 3, &[vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let p = pts(&[&["2", "0"], &["0", "1"], &["0", "-1"]]);
        let tags = vec![VertexTag::Hyperideal, VertexTag::Ideal, VertexTag::Ideal];
        let f = EuclideanFellow::new(l, p, tags).unwrap();
        let o = check_orthogonality(&f);
        assert_eq!(o.checks.len(), 2);
        assert!(o.all_zero());
        let face = f.truncation_face(0).unwrap();
        assert_eq!(face.lateral_facets, vec![0, 2]);
    }

    #[test]
    fn edge_outside_ball_violates_condition_four() {
        // tetrahedron with edge (2,0,0)-(2,1,0)
        let facets = vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]];
        let l = FaceLattice::from_facets(3, 4, &facets).unwrap();
        let p = pts(&[&["2", "0", "0"], &["2", "1", "0"], &["0", "0", "1"], &["0", "0", "-1"]]);
        let tags = vec![
            VertexTag::Hyperideal,
            VertexTag::Hyperideal,
            VertexTag::Ideal,
            VertexTag::Ideal,
        ];
        let r = validate_fellow(&l, &p, &tags);
        assert!(r.holds(FellowCondition::IdealOnSphere));
        assert!(r.holds(FellowCondition::HyperidealOutsideBall));
        assert!(!r.holds(FellowCondition::Codim2MeetsBall));
        assert_eq!(
            r.violations,
            vec![FellowViolation::FaceMissesBall {
                face: vec![0, 1],
                min_norm_sq: BigRational::from_integer(4.into()),
            }]
        );
    }

    #[test]
    fn convexity_failures() {
        // +x moved to the origin, inside the hull of the others
        let (l, mut p) = octahedron();
        p[0] = RationalPoint::origin(3);
        let r = validate_fellow(&l, &p, &[VertexTag::Ideal; 6]);
        assert!(!r.holds(FellowCondition::Convexity));
        assert!(!r.holds(FellowCondition::IdealOnSphere));
        assert!(r.violations.contains(&FellowViolation::Convexity(
            ConvexityViolation::NotSupporting { facet: 0, vertex: 3 }
        )));
        assert!(ConvexPolytope::new(l, p).is_err());

        let cube = crate::fixtures::unit_cube();
        let mut p = cube.polyhedra()[0].coords.clone().unwrap();
        p[7] = RationalPoint::from_ints(&[1, 1, 2]);
        let err = ConvexPolytope::new(cube.polyhedra()[0].lattice.clone(), p).unwrap_err();
        let GeometryError::NotConvex(v) = err else { panic!("{err:?}") };
        assert!(v.contains(&ConvexityViolation::NonFlatFacet { facet: 5 }));
    }

    #[test]
    fn truncation_plane_basics() {
        let h = truncation_plane(&RationalPoint::from_ints(&[2, 0, 0])).unwrap();
        assert!(h.contains(&RationalPoint::parse(&["1/2", "7", "-3"]).unwrap()));
        assert!(h.separates_pole_from_origin());
        assert!(truncation_plane(&RationalPoint::from_ints(&[0, 1])).is_err());
        // v = (3/2, 0): the line x1 = 2/3
        let h = truncation_plane(&RationalPoint::parse(&["3/2", "0"]).unwrap()).unwrap();
        assert!(h.contains(&RationalPoint::parse(&["2/3", "5"]).unwrap()));
        assert!(!h.contains(&RationalPoint::parse(&["1/2", "0"]).unwrap()));
    }

    #[test]
    fn overlapping_truncation_planes_warn() {
        // square with hyperideal corners (±2, 0) and (0, ±2)
        let l = FaceLattice::from_facets(2, 4, &[vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]])
            .unwrap();
        let p = pts(&[&["2", "0"], &["-2", "0"], &["0", "2"], &["0", "-2"]]);
        let r = validate_fellow(&l, &p, &[VertexTag::Hyperideal; 4]);
        assert!(r.is_valid());
        // H(0) ∩ H(2) = (1/2, 1/2), inside; H(0) and H(1) are parallel.
        assert_eq!(r.warnings.len(), 4);
        assert!(r.warnings.iter().all(|w| w.min_norm_sq == BigRational::new(1.into(), 2.into())));
    }
}
