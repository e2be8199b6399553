use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, maximal_minors_gcd, rank, solve, Rational};
use crate::point::{Point, Vector};
use crate::polytope::{hull_to_halfspaces, Polytope};

/// Convex hull of affinely independent rational points, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::EmptyInput);
        };
        let n = first.dim();
        if let Some(p) = vertices.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        vertices.sort();
        let rows: Vec<Vector> = vertices[1..].iter().map(|p| p.minus(&vertices[0])).collect();
        if rank(&rows, n) != rows.len() {
            return Err(Error::AffinelyDependent);
        }
        Ok(Simplex { vertices })
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<Point>) -> Self {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn barycenter(&self) -> Point {
        Point::barycenter(&self.vertices)
    }

    pub fn to_polytope(&self) -> Polytope {
        hull_to_halfspaces(&self.vertices).expect("simplex is nonempty")
    }

    /// Barycentric coordinates of `x`, or `None` when `x` is off the
    /// affine span.
    pub fn barycentric(&self, x: &Point) -> Option<Vec<Rational>> {
        barycentric(&self.vertices, x)
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.barycentric(x)
            .is_some_and(|l| l.iter().all(|c| !c.is_negative()))
    }

    pub fn relative_interior_contains(&self, x: &Point) -> bool {
        self.barycentric(x)
            .is_some_and(|l| l.iter().all(|c| c.is_positive()))
    }

    /// Nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.vertices.len();
        (1u32..(1 << k))
            .map(|mask| {
                Simplex::from_sorted_unchecked(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.vertices[i].clone())
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.binary_search(v).is_ok())
    }

    pub fn is_regular(&self) -> bool {
        is_regular_vertices(&self.vertices)
    }

    /// The smallest affine map `λ₀ + λ·x` on the span of the simplex with
    /// `λ` inside the direction space. Coefficients are `[λ₀, λ₁, …, λₙ]`.
    pub fn solve_affine(&self, values: &[Rational]) -> Vec<Rational> {
        solve_affine_on_simplex(self, values)
    }
}

pub(crate) fn barycentric(vertices: &[Point], x: &Point) -> Option<Vec<Rational>> {
    let n = x.dim();
    let mut a: Vec<Vector> = (0..n)
        .map(|i| vertices.iter().map(|v| v.0[i].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); vertices.len()]);
    let mut b = x.0.clone();
    b.push(Rational::one());
    solve(&a, &b)
}

pub(crate) fn is_regular_vertices(vertices: &[Point]) -> bool {
    let rows: Vec<Vec<BigInt>> = vertices.iter().map(|v| v.homogeneous().0).collect();
    maximal_minors_gcd(&rows).is_one()
}

/// See [`Simplex::solve_affine`].
pub fn solve_affine_on_simplex(s: &Simplex, values: &[Rational]) -> Vec<Rational> {
    let v0 = &s.vertices[0];
    let dirs: Vec<Vector> = s.vertices[1..].iter().map(|v| v.minus(v0)).collect();
    let gram: Vec<Vector> = dirs
        .iter()
        .map(|a| dirs.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vector = values[1..].iter().map(|f| f - &values[0]).collect();
    let c = if dirs.is_empty() {
        Vec::new()
    } else {
        solve(&gram, &rhs).expect("gram matrix of independent vectors is invertible")
    };
    let mut lin = vec![Rational::zero(); s.ambient_dim()];
    for (ci, d) in c.iter().zip(&dirs) {
        for (l, di) in lin.iter_mut().zip(d) {
            *l += ci * di;
        }
    }
    let mut out = vec![&values[0] - dot(&lin, &v0.0)];
    out.extend(lin);
    out
}
