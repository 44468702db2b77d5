use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A point of `Q^n` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint(pub Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![BigRational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Parses each coordinate from a fraction string `"p/q"` or an integer `"p"`.
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self, String> {
        coords
            .iter()
            .map(|c| parse_fraction(c.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> BigRational {
        self.dot(self)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    /// Vertex centroid of a non-empty point set.
    pub fn centroid<'a, I: IntoIterator<Item = &'a RationalPoint>>(points: I) -> Self {
        let mut iter = points.into_iter();
        let first = iter.next().expect("centroid of an empty set");
        let mut sum = first.clone();
        let mut n = 1i64;
        for p in iter {
            sum = sum.add(p);
            n += 1;
        }
        sum.scale(&BigRational::new(BigInt::one(), n.into()))
    }

    /// Coordinates as fraction strings, `"p"` for integers.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_fraction).collect()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

pub fn parse_fraction(s: &str) -> Result<BigRational, String> {
    let trimmed = s.trim();
    let value = BigRational::from_str(trimmed).map_err(|_| format!("bad fraction {s:?}"))?;
    Ok(value)
}

pub fn format_fraction(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
