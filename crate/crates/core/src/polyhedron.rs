//! Finite unions of rational polytopes.

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Space};
use crate::point::Point;
use crate::polytope::{hull_to_halfspaces, triangulate_polytope, Polytope};
use crate::simplex::Simplex;
use crate::triangulation::box_mesh_around;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    parts: Vec<Polytope>,
}

impl Polyhedron {
    /// Parts are deduplicated and kept in a canonical order.
    pub fn new(mut parts: Vec<Polytope>) -> Self {
        parts.sort_by(|a, b| a.vertices().cmp(b.vertices()));
        parts.dedup();
        Polyhedron { parts }
    }

    pub fn from_points(points: &[Point]) -> Self {
        Polyhedron::new(vec![hull_to_halfspaces(points).expect("nonempty point set")])
    }

    pub fn from_simplices(simplices: &[Simplex]) -> Self {
        Polyhedron::new(simplices.iter().map(|s| s.to_polytope()).collect())
    }

    /// `[0,1]ⁿ`.
    pub fn cube(n: usize) -> Self {
        let corners: Vec<Point> = (0..1u32 << n)
            .map(|mask| {
                Point::from_ints(&(0..n).map(|i| ((mask >> i) & 1) as i64).collect::<Vec<_>>())
            })
            .collect();
        Polyhedron::from_points(&corners)
    }

    /// The boundary of the unit square, edges bottom, right, top, left.
    pub fn boundary_square() -> Self {
        let c = |x, y| Point::from_ints(&[x, y]);
        Polyhedron::new(
            [
                [c(0, 0), c(1, 0)],
                [c(1, 0), c(1, 1)],
                [c(1, 1), c(0, 1)],
                [c(0, 1), c(0, 0)],
            ]
            .iter()
            .map(|e| hull_to_halfspaces(e).expect("edge"))
            .collect(),
        )
    }

    pub fn parts(&self) -> &[Polytope] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.parts.first().map(|p| p.ambient_dim())
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        self.parts.iter().all(|p| polytope_in(p, other))
    }

    /// Set equality by double inclusion.
    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }
}

pub(crate) fn polytope_in(p: &Polytope, q: &Polyhedron) -> bool {
    if q.parts.iter().any(|r| p.vertices().iter().all(|v| r.contains(v))) {
        return true;
    }
    if p.vertices().iter().any(|v| !q.contains_point(v)) {
        return false;
    }
    triangulate_polytope(p).iter().all(|s| simplex_in(s, q))
}

/// Carves the simplex against every part; the simplex lies in `q` iff each
/// resulting cell lies in a single part.
pub(crate) fn simplex_in(s: &[Point], q: &Polyhedron) -> bool {
    if q.parts.iter().any(|r| s.iter().all(|v| r.contains(v))) {
        return true;
    }
    let mut m = Mesh::new(s[0].dim());
    let ids: Vec<usize> = s.iter().map(|p| m.add_vertex(p.clone(), Vec::new())).collect();
    m.add_cell(ids);
    for r in &q.parts {
        m.carve(r, &Space::Domain);
    }
    m.live_cells().into_iter().all(|c| {
        let pts = m.cell_points(c);
        q.parts.iter().any(|r| pts.iter().all(|v| r.contains(v)))
    })
}

/// A rational point of `q ∖ p`: the barycenter of the first cell, in
/// canonical order, of a triangulation of `q` refined against `p` that is
/// not inside `p`.
pub fn rational_point_in_difference(q: &Polyhedron, p: &Polyhedron) -> Result<Point> {
    if q.is_empty() {
        return Err(Error::NoDifference);
    }
    let all: Vec<Polytope> = q.parts.iter().chain(&p.parts).cloned().collect();
    let mut m = box_mesh_around(&all);
    for r in &all {
        m.carve(r, &Space::Domain);
    }
    m.restrict_to(&q.parts);
    let (c, _) = m.to_complex();
    for s in c.maximal_simplices() {
        let b = s.barycenter();
        if !p.contains_point(&b) {
            return Ok(b);
        }
    }
    Err(Error::NoDifference)
}
