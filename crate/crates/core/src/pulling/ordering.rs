use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PullingError;
use crate::complex::{PolyhedralComplex, VertexRef};

/// A total order on the vertex classes. `order()[0]` is pulled first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrdering {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl VertexOrdering {
    /// `order` must list every class `0..order.len()` exactly once.
    pub fn new(order: Vec<usize>) -> Result<Self, PullingError> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &c) in order.iter().enumerate() {
            if c >= n || rank[c] != usize::MAX {
                return Err(PullingError::BadOrder(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            rank[c] = i;
        }
        Ok(Self { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity")
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.order.iter().rev().copied().collect()).expect("permutation")
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::new(order).expect("permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of `class` in the pulling order (0 = pulled first).
    pub fn rank(&self, class: usize) -> usize {
        self.rank[class]
    }
}

/// How to choose the ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    Default,
    Random(u64),
    Explicit(Vec<usize>),
}

impl OrderSpec {
    /// Parses a whitespace-separated list of class ids.
    pub fn parse_list(text: &str) -> Result<Self, PullingError> {
        text.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| PullingError::BadOrder(format!("bad class id {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OrderSpec::Explicit)
    }
}

impl FromStr for OrderSpec {
    type Err = PullingError;

    /// `default` or `random:SEED`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "default" {
            return Ok(OrderSpec::Default);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(OrderSpec::Random)
                .map_err(|_| PullingError::BadOrder(format!("bad seed {seed:?}")));
        }
        Err(PullingError::BadOrder(format!("unknown ordering {s:?}")))
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Default => f.write_str("default"),
            OrderSpec::Random(s) => write!(f, "random:{s}"),
            OrderSpec::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "explicit:{}", s.join(","))
            }
        }
    }
}

/// First pair of distinct vertices of one polyhedron in the same class.
pub fn find_returning_pair(complex: &PolyhedralComplex) -> Option<(usize, usize, usize)> {
    for (p, poly) in complex.polyhedra().iter().enumerate() {
        let classes: Vec<usize> = (0..poly.num_vertices())
            .map(|v| complex.vertex_class(VertexRef { polyhedron: p, vertex: v }))
            .collect();
        for v in 0..classes.len() {
            for w in v + 1..classes.len() {
                if classes[v] == classes[w] {
                    return Some((p, v, w));
                }
            }
        }
    }
    None
}

/// Orders the vertex classes of a complex with no returning diagonals.
pub fn order_vertices(
    complex: &PolyhedralComplex,
    spec: &OrderSpec,
) -> Result<VertexOrdering, PullingError> {
    if let Some((polyhedron, v, w)) = find_returning_pair(complex) {
        return Err(PullingError::ReturningDiagonal { polyhedron, v, w });
    }
    let n = complex.num_vertex_classes();
    match spec {
        OrderSpec::Default => Ok(VertexOrdering::identity(n)),
        OrderSpec::Random(seed) => Ok(VertexOrdering::random(n, *seed)),
        OrderSpec::Explicit(order) => {
            if order.len() != n {
                return Err(PullingError::BadOrder(format!(
                    "ordering lists {} classes, complex has {n}",
                    order.len()
                )));
            }
            VertexOrdering::new(order.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn orders() {
        let cube = fixtures::unit_cube();
        let o = order_vertices(&cube, &OrderSpec::Default).unwrap();
        assert_eq!(o.order(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(o.reversed().rank(7), 0);
        let r = order_vertices(&cube, &OrderSpec::Random(9)).unwrap();
        assert_eq!(r, VertexOrdering::random(8, 9));
        let mut sorted = r.order().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
        assert!(matches!(
            order_vertices(&fixtures::figure_eight(), &OrderSpec::Default),
            Err(PullingError::ReturningDiagonal { polyhedron: 0, v: 0, w: 1 })
        ));
        assert!(VertexOrdering::new(vec![0, 0, 1]).is_err());
        assert_eq!("random:5".parse::<OrderSpec>().unwrap(), OrderSpec::Random(5));
        assert!("rand".parse::<OrderSpec>().is_err());
        assert_eq!(
            OrderSpec::parse_list("2 0\n1").unwrap(),
            OrderSpec::Explicit(vec![2, 0, 1])
        );
    }
}
