//! Convex rational polytopes in both representations.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, dot_int, nullspace, primitive, rank, rref, Rational};
use crate::point::{Point, Vector};

/// `normal · x ≥ offset`, or `normal · x = offset` inside an equality list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl HalfSpace {
    /// `normal · x − offset`.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot_int(&self.normal, x) - Rational::from_integer(self.offset.clone())
    }

    pub fn normal_rational(&self) -> Vector {
        self.normal.iter().cloned().map(Rational::from_integer).collect()
    }

    fn from_row(row: &[Rational]) -> Self {
        let mut p = primitive(row);
        let offset = p.pop().expect("row has an offset entry");
        HalfSpace { normal: p, offset }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfSpaceSystem {
    pub inequalities: Vec<HalfSpace>,
    pub equalities: Vec<HalfSpace>,
}

impl HalfSpaceSystem {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self.inequalities.iter().all(|h| !h.eval(x).is_negative())
    }

    pub fn relint_contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self.inequalities.iter().all(|h| h.eval(x).is_positive())
    }
}

/// `basepoint + span(directions)`; `basepoint == None` is the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub basepoint: Option<Point>,
    pub directions: Vec<Vector>,
}

impl AffineSubspace {
    pub fn dim(&self) -> isize {
        match self.basepoint {
            None => -1,
            Some(_) => self.directions.len() as isize,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        let Some(base) = &self.basepoint else {
            return false;
        };
        let mut rows = self.directions.clone();
        rows.push(x.minus(base));
        rank(&rows, x.dim()) == self.directions.len()
    }

    pub fn contains_direction(&self, v: &[Rational]) -> bool {
        let mut rows = self.directions.clone();
        rows.push(v.to_vec());
        rank(&rows, v.len()) == self.directions.len()
    }
}

/// Affine hull of a point set. Directions are the reduced echelon rows of
/// the differences to the first point.
pub fn affine_span(points: &[Point]) -> AffineSubspace {
    let Some(base) = points.first() else {
        return AffineSubspace {
            basepoint: None,
            directions: Vec::new(),
        };
    };
    let mut rows: Vec<Vector> = points[1..].iter().map(|p| p.minus(base)).collect();
    rref(&mut rows, base.dim());
    AffineSubspace {
        basepoint: Some(base.clone()),
        directions: rows,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    vertices: Vec<Point>,
    halfspaces: HalfSpaceSystem,
}

impl Polytope {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &HalfSpaceSystem {
        &self.halfspaces
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim() - self.halfspaces.equalities.len()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.halfspaces.contains(&x.0)
    }

    pub fn relint_contains(&self, x: &Point) -> bool {
        self.halfspaces.relint_contains(&x.0)
    }

    pub fn bbox(&self) -> (Vector, Vector) {
        bbox(&self.vertices)
    }

    /// Sub-polytopes cut out by each inequality.
    pub fn facets(&self) -> Vec<Polytope> {
        self.halfspaces
            .inequalities
            .iter()
            .map(|h| {
                let tight: Vec<Point> = self
                    .vertices
                    .iter()
                    .filter(|v| h.eval(&v.0).is_zero())
                    .cloned()
                    .collect();
                hull_to_halfspaces(&tight).expect("facet of a polytope is nonempty")
            })
            .collect()
    }
}

pub(crate) fn bbox(points: &[Point]) -> (Vector, Vector) {
    let n = points[0].dim();
    let mut lo = points[0].0.clone();
    let mut hi = points[0].0.clone();
    for p in &points[1..] {
        for i in 0..n {
            if p.0[i] < lo[i] {
                lo[i] = p.0[i].clone();
            }
            if p.0[i] > hi[i] {
                hi[i] = p.0[i].clone();
            }
        }
    }
    (lo, hi)
}

pub(crate) fn boxes_overlap(a: &(Vector, Vector), b: &(Vector, Vector)) -> bool {
    a.0.iter()
        .zip(&a.1)
        .zip(b.0.iter().zip(&b.1))
        .all(|((alo, ahi), (blo, bhi))| alo <= bhi && blo <= ahi)
}

/// H-representation of the convex hull of `points` by exhaustive facet
/// search over vertex subsets.
pub fn hull_to_halfspaces(points: &[Point]) -> Result<Polytope> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput);
    };
    let n = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let span = affine_span(&pts);
    let base = &pts[0];
    let dirs = span.directions;
    let d = dirs.len();

    let mut eq_rows: Vec<Vector> = nullspace(&dirs, n)
        .into_iter()
        .map(|mut a| {
            let off = dot(&a, &base.0);
            a.push(off);
            a
        })
        .collect();
    rref(&mut eq_rows, n);
    let equalities: Vec<HalfSpace> = eq_rows.iter().map(|r| HalfSpace::from_row(r)).collect();

    let mut ineqs: BTreeSet<HalfSpace> = BTreeSet::new();
    if d >= 1 {
        for subset in pts.iter().combinations(d) {
            let q0 = subset[0];
            let m: Vec<Vector> = subset[1..]
                .iter()
                .map(|q| {
                    let diff = q.minus(q0);
                    dirs.iter().map(|b| dot(b, &diff)).collect()
                })
                .collect();
            let ker = nullspace(&m, d);
            if ker.len() != 1 {
                continue;
            }
            let mut alpha = vec![Rational::zero(); n];
            for (c, b) in ker[0].iter().zip(&dirs) {
                for (a, bi) in alpha.iter_mut().zip(b) {
                    *a += c * bi;
                }
            }
            let signs: Vec<Rational> = pts.iter().map(|p| dot(&alpha, &p.minus(q0))).collect();
            let pos = signs.iter().any(|s| s.is_positive());
            let neg = signs.iter().any(|s| s.is_negative());
            if pos && neg {
                continue;
            }
            if neg {
                alpha.iter_mut().for_each(|a| *a = -a.clone());
            }
            let mut row = alpha.clone();
            row.push(dot(&alpha, &q0.0));
            ineqs.insert(HalfSpace::from_row(&row));
        }
    }
    let inequalities: Vec<HalfSpace> = ineqs.into_iter().collect();

    let eq_normals: Vec<Vector> = equalities.iter().map(|h| h.normal_rational()).collect();
    let vertices: Vec<Point> = pts
        .into_iter()
        .filter(|p| {
            let mut rows = eq_normals.clone();
            rows.extend(
                inequalities
                    .iter()
                    .filter(|h| h.eval(&p.0).is_zero())
                    .map(|h| h.normal_rational()),
            );
            rank(&rows, n) == n
        })
        .collect();

    Ok(Polytope {
        vertices,
        halfspaces: HalfSpaceSystem {
            inequalities,
            equalities,
        },
    })
}

/// Pulling triangulation from the lexicographically smallest vertex.
/// Returns vertex lists of the simplices.
pub fn triangulate_polytope(p: &Polytope) -> Vec<Vec<Point>> {
    if p.vertices.len() == p.dim() + 1 {
        return vec![p.vertices.clone()];
    }
    let v0 = &p.vertices[0];
    let mut out = Vec::new();
    for (h, facet) in p.halfspaces.inequalities.iter().zip(p.facets()) {
        if h.eval(&v0.0).is_zero() {
            continue;
        }
        for mut s in triangulate_polytope(&facet) {
            s.push(v0.clone());
            s.sort();
            out.push(s);
        }
    }
    out.sort();
    out
}
