mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use virtri::geometry::{realize_subdivision, ConvexPolytope, RationalPoint};
use virtri::pipeline::{virtualize, PipelineConfig};
use virtri::pulling::{pull_lattice, subdivide_complex, verify_triangulation, VertexOrdering};
use virtri::{fixtures, FaceLattice, VertexTag};

fn suite(seed: u64, count: usize) -> Vec<RandomPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 5 {
            0 => random_polytope(&mut rng, 2, 12),
            1 => random_prism(&mut rng, 6),
            2 => random_pyramid(&mut rng, 11),
            _ => random_polytope(&mut rng, 3, 12),
        })
        .collect()
}

fn sorted(simplices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

fn check(p: &RandomPolytope, order: &[usize]) {
    let n = p.points.len();
    let lattice = FaceLattice::from_facets(p.dim, n, &p.facets).unwrap();
    let sub = pull_lattice(&lattice, order).unwrap();
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let verts: Vec<usize> = (0..n).collect();
    let oracle = naive_pull(p.dim, &verts, &p.facets, &|v| rank[v]);
    assert_eq!(sorted(&sub.simplices), oracle, "{p:?} order {order:?}");
    let points: Vec<RationalPoint> = p.points.iter().map(|c| RationalPoint::from_ints(c)).collect();
    let polytope = ConvexPolytope::new(lattice, points.clone()).unwrap();
    let r = realize_subdivision(&polytope, &sub.simplices).unwrap();
    let volume = pyramid_volume(&points, &p.facets);
    assert_eq!(r.total_volume, volume);
    assert_eq!(r.polytope_volume, volume);
    assert!(r.simplices.iter().all(|s| s.signed_volume != num_rational::BigRational::from_integer(0.into())));
}

#[test]
fn simplex_counts_and_volumes_match_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in suite(11, 50) {
        let mut order: Vec<usize> = (0..p.points.len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            check(&p, &order);
        }
    }
}

#[test]
fn whitehead_cover_has_four_tetrahedra_per_octahedron() {
    let run = virtualize(&fixtures::whitehead(), &PipelineConfig::default()).unwrap();
    let v = run.result.unwrap();
    let d = v.cover.as_ref().unwrap().degree();
    assert_eq!(v.triangulation.simplices.len(), 4 * d);
    assert!(v.triangulation.certificate.passed);
    // a different ordering still triangulates the same cover
    let n = v.complex.num_vertex_classes();
    let t = subdivide_complex(&v.complex, &VertexOrdering::random(n, 17)).unwrap();
    assert_eq!(t.simplices.len(), 4 * d);
    assert!(verify_triangulation(&t, &v.complex).passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_orders_agree_with_naive_pulling(seed in 0u64..10_000, order_seed in any::<u64>()) {
        let p = suite(seed, 5).pop().unwrap();
        let mut order: Vec<usize> = (0..p.points.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));
        check(&p, &order);
    }

    #[test]
    fn doubles_triangulate_cleanly(seed in 0u64..10_000, order_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = suite(seed, 4).pop().unwrap();
        let n = p.points.len();
        let mut relabel: Vec<usize> = (0..n).collect();
        relabel.shuffle(&mut rng);
        let complex = double(&p, &relabel, &vec![VertexTag::Ideal; n]);
        let t = subdivide_complex(&complex, &VertexOrdering::random(n, order_seed)).unwrap();
        prop_assert!(t.certificate.passed);
        prop_assert_eq!(t.simplices.len() % 2, 0);
    }
}
