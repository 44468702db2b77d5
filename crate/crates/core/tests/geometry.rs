mod common;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use virtri::geometry::{
    check_orthogonality, truncation_plane, validate_fellow, ConvexPolytope, EuclideanFellow,
    FellowCondition, RationalPoint,
};
use virtri::{fixtures, FaceLattice, VertexTag};

fn pt(c: &[&str]) -> RationalPoint {
    RationalPoint::parse(c).unwrap()
}

#[test]
fn planar_truncation_line() {
    let v = pt(&["3/2", "0"]);
    let plane = truncation_plane(&v).unwrap();
    // H(v) is x1 = 2/3
    assert!(plane.contains(&pt(&["2/3", "5"])));
    assert!(!plane.contains(&pt(&["1/2", "0"])));
    // H(v) meets the circle at irrational points; use x + s·u with u ⟂ x
    let x = pt(&["3/5", "4/5"]);
    let v = x.add(&pt(&["-4/5", "3/5"]).scale(&q(1, 2)));
    let plane = truncation_plane(&v).unwrap();
    assert!(plane.contains(&x));
    assert!(plane.tangency_defect(&x).is_zero());
    assert!(truncation_plane(&pt(&["1/2", "0"])).is_err());
}

#[test]
fn edge_between_far_hyperideal_vertices_misses_ball() {
    // a tetrahedron with edge (2,0,0)-(2,1,0)
    let points = vec![
        pt(&["2", "0", "0"]),
        pt(&["2", "1", "0"]),
        pt(&["0", "0", "1"]),
        pt(&["-1", "-1", "-1"]),
    ];
    let tags = vec![VertexTag::Hyperideal, VertexTag::Hyperideal, VertexTag::Ideal, VertexTag::Hyperideal];
    let report = validate_fellow(&FaceLattice::simplex(3), &points, &tags);
    assert!(!report.holds(FellowCondition::Codim2MeetsBall));
    let oracle = segment_min_norm_sq(&points[0], &points[1]);
    assert_eq!(oracle, q(4, 1));
    let (_, m) = report.codim2_minima.iter().find(|(f, _)| f == &vec![0, 1]).unwrap();
    assert_eq!(*m, oracle);
}

#[test]
fn fixture_volumes_match_pyramid_oracle() {
    for complex in [fixtures::unit_cube(), fixtures::whitehead(), fixtures::double_pyramid(), fixtures::double_tetrahedron()] {
        for poly in complex.polyhedra() {
            let points = poly.coords.clone().unwrap();
            let polytope = ConvexPolytope::new(poly.lattice.clone(), points.clone()).unwrap();
            assert_eq!(polytope.volume(), pyramid_volume(&points, poly.lattice.facets()));
        }
    }
    let cube = fixtures::unit_cube();
    let p = &cube.polyhedra()[0];
    assert_eq!(pyramid_volume(p.coords.as_ref().unwrap(), p.lattice.facets()), BigRational::one());
}

#[test]
fn fixtures_are_fellows_with_right_angles() {
    for complex in [fixtures::whitehead(), fixtures::double_pyramid(), fixtures::double_tetrahedron()] {
        for poly in complex.polyhedra() {
            let fellow = EuclideanFellow::from_polyhedron(poly).unwrap();
            assert!(check_orthogonality(&fellow).all_zero());
            for v in fellow.hyperideal_vertices() {
                let face = fellow.truncation_face(v).unwrap();
                assert_eq!(face.lateral_facets, poly.lattice.facets_containing(&[v]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stereographic_points_are_ideal(s in -50i64..50, t in -50i64..50, d in 1i64..20) {
        let x = sphere_point(&q(s, d), &q(t, d));
        prop_assert_eq!(x.norm_sq(), BigRational::one());
    }

    #[test]
    fn tangent_hyperideal_identity(s in -20i64..20, t in -20i64..20, k in 1i64..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sphere_point(&q(s, 3), &q(t, 4));
        let v = tangent_hyperideal(&mut rng, &x, &q(k, 7));
        prop_assert!(v.norm_sq() > BigRational::one());
        let plane = truncation_plane(&v).unwrap();
        prop_assert!(plane.tangency_defect(&x).is_zero());
        prop_assert!(plane.separates_pole_from_origin());
    }

    #[test]
    fn random_polytopes_have_exact_volume(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polytope(&mut rng, 3, 10);
        let lattice = FaceLattice::from_facets(3, p.points.len(), &p.facets).unwrap();
        let points: Vec<RationalPoint> = p.points.iter().map(|c| RationalPoint::from_ints(c)).collect();
        let polytope = ConvexPolytope::new(lattice, points.clone()).unwrap();
        prop_assert_eq!(polytope.volume(), pyramid_volume(&points, &p.facets));
    }
}
