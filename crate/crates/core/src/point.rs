use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{format_rational, lcm_all, to_rational, Rational};

/// A rational vector; used for directions and displacements.
pub type Vector = Vec<Rational>;

/// A point of ℚⁿ. Ordering is lexicographic on coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(pub Vec<Rational>);

/// The integer lift `den(v)·(v, 1)` of a rational point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomogeneousVector(pub Vec<BigInt>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        Point(
            coords
                .iter()
                .map(|&(n, d)| Rational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        lcm_all(self.0.iter().map(|c| c.denom()))
    }

    pub fn homogeneous(&self) -> HomogeneousVector {
        let d = self.denominator();
        let dq = to_rational(&d);
        let mut entries: Vec<BigInt> = self.0.iter().map(|c| (c * &dq).to_integer()).collect();
        entries.push(d);
        HomogeneousVector(entries)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn translate(&self, v: &[Rational]) -> Point {
        Point(self.0.iter().zip(v).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Point) -> Vector {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// Convex (or affine) combination `Σ wᵢ pᵢ`.
    pub fn combine<'a>(points: impl IntoIterator<Item = (&'a Point, &'a Rational)>) -> Point {
        let mut acc: Option<Vec<Rational>> = None;
        for (p, w) in points {
            let acc = acc.get_or_insert_with(|| vec![Rational::zero(); p.dim()]);
            if w.is_zero() {
                continue;
            }
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += c * w;
            }
        }
        Point(acc.unwrap_or_default())
    }

    pub fn barycenter(points: &[Point]) -> Point {
        let w = Rational::new(BigInt::one(), BigInt::from(points.len()));
        Point::combine(points.iter().map(|p| (p, &w)))
    }
}

impl HomogeneousVector {
    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    /// Divides out the last entry.
    pub fn to_point(&self) -> Point {
        let (last, rest) = self.0.split_last().expect("homogeneous vector is never empty");
        Point(
            rest.iter()
                .map(|e| Rational::new(e.clone(), last.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}
