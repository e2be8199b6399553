//! Rational simplicial complexes and regular triangulations.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::mesh::{integer_hull_box, meets_in_face, Mesh, Space, DEFAULT_BLOWUP_CAP};
use crate::frame::Frame;
use crate::point::Point;
use crate::polyhedron::Polyhedron;
use crate::polytope::{bbox, boxes_overlap, HalfSpace, Polytope};
use crate::simplex::{is_regular_vertices, Simplex};

/// A complex given by its maximal simplices. Vertices are sorted and every
/// simplex is a sorted list of vertex indices; the simplex list is sorted
/// too, which is the canonical order used for every choice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
    frames: FrameCache,
}

/// Floating-point barycentric frames, used only to skip simplices that
/// clearly miss a query point before the exact test.
#[derive(Clone, Default)]
struct FrameCache(OnceLock<Vec<Frame>>);

impl PartialEq for FrameCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for FrameCache {}

impl std::hash::Hash for FrameCache {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl std::fmt::Debug for FrameCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FrameCache")
    }
}

impl SimplicialComplex {
    /// Canonicalizes the input and drops non-maximal simplices. Does not
    /// check that simplices meet in common faces; see [`is_valid_complex`].
    pub fn new(vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::EmptyInput);
        };
        let n = first.dim();
        let mut sets: BTreeSet<Vec<Point>> = BTreeSet::new();
        for s in &simplices {
            let pts: Vec<Point> = s.iter().map(|&i| vertices[i].clone()).collect();
            if let Some(p) = pts.iter().find(|p| p.dim() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            sets.insert(Simplex::new(pts)?.vertices().to_vec());
        }
        Ok(Self::from_simplex_sets(sets.into_iter().collect()))
    }

    pub fn from_simplices(simplices: &[Simplex]) -> Self {
        Self::from_simplex_sets(simplices.iter().map(|s| s.vertices().to_vec()).collect())
    }

    fn from_simplex_sets(sets: Vec<Vec<Point>>) -> Self {
        let vertices: Vec<Point> = sets
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let idx = |p: &Point| vertices.binary_search(p).expect("vertex present");
        let mut cells: Vec<Vec<usize>> = sets
            .iter()
            .map(|s| {
                let mut c: Vec<usize> = s.iter().map(idx).collect();
                c.sort();
                c
            })
            .collect();
        cells.sort();
        cells.dedup();
        let maximal: Vec<Vec<usize>> = cells
            .iter()
            .filter(|c| {
                !cells.iter().any(|d| {
                    d.len() > c.len() && c.iter().all(|v| d.binary_search(v).is_ok())
                })
            })
            .cloned()
            .collect();
        let used: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
        if used.len() == vertices.len() {
            return SimplicialComplex {
                vertices,
                simplices: maximal,
                frames: FrameCache::default(),
            };
        }
        let pts: Vec<Vec<Point>> = maximal
            .iter()
            .map(|c| c.iter().map(|&i| vertices[i].clone()).collect())
            .collect();
        Self::from_simplex_sets(pts)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Self {
        SimplicialComplex {
            vertices,
            simplices,
            frames: FrameCache::default(),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Maximal simplices as index lists, in canonical order.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn simplex_points(&self, i: usize) -> Vec<Point> {
        self.simplices[i].iter().map(|&v| self.vertices[v].clone()).collect()
    }

    pub fn simplex(&self, i: usize) -> Simplex {
        Simplex::from_sorted_unchecked(self.simplex_points(i))
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        (0..self.simplices.len()).map(|i| self.simplex(i)).collect()
    }

    /// Every face of every maximal simplex, sorted.
    pub fn all_faces(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in &self.simplices {
            for k in 1..=s.len() {
                for f in s.iter().copied().combinations(k) {
                    out.insert(f);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn contains_face(&self, face: &Simplex) -> bool {
        let ids: Option<Vec<usize>> = face.vertices().iter().map(|p| self.vertex_index(p)).collect();
        ids.is_some_and(|ids| {
            self.simplices
                .iter()
                .any(|s| ids.iter().all(|v| s.binary_search(v).is_ok()))
        })
    }

    pub fn is_regular(&self) -> bool {
        (0..self.simplices.len()).all(|i| is_regular_vertices(&self.simplex_points(i)))
    }

    /// `|𝒦|` as a union of its maximal simplices.
    pub fn carrier(&self) -> Polyhedron {
        Polyhedron::new(self.maximal_simplices().iter().map(|s| s.to_polytope()).collect())
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.locate(x).is_some()
    }

    /// First maximal simplex (canonical order) containing `x`.
    pub fn locate(&self, x: &Point) -> Option<usize> {
        let frames = self
            .frames
            .0
            .get_or_init(|| (0..self.simplices.len()).map(|i| Frame::new(&self.simplex_points(i))).collect());
        let xf = Frame::point(x);
        (0..self.simplices.len()).find(|&i| {
            if !frames[i].may_contain(&xf) {
                return false;
            }
            let pts = self.simplex_points(i);
            let (lo, hi) = bbox(&pts);
            boxes_overlap(&(lo, hi), &(x.0.clone(), x.0.clone()))
                && Simplex::from_sorted_unchecked(pts).contains(x)
        })
    }

    /// Pure and of full ambient dimension.
    pub fn is_full_dimensional(&self) -> bool {
        let n = self.ambient_dim();
        self.simplices.iter().all(|s| s.len() == n + 1)
    }
}

/// A complex whose simplices have all passed the unimodularity check.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularTriangulation {
    complex: SimplicialComplex,
    certified: bool,
}

impl RegularTriangulation {
    pub fn certify(complex: SimplicialComplex) -> Result<Self> {
        if !is_regular(&complex) {
            return Err(Error::NotRegular);
        }
        Ok(RegularTriangulation {
            complex,
            certified: true,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn into_complex(self) -> SimplicialComplex {
        self.complex
    }
}

impl std::ops::Deref for RegularTriangulation {
    type Target = SimplicialComplex;

    fn deref(&self) -> &SimplicialComplex {
        &self.complex
    }
}

/// gcd of maximal minors of the homogeneous vertex rows equals one for
/// every simplex.
pub fn is_regular(c: &SimplicialComplex) -> bool {
    c.is_regular()
}

/// The point whose homogeneous direction is the sum of the vertex lifts.
pub fn farey_mediant(f: &Simplex) -> Point {
    let (p, _) = mediant_weights(f.vertices());
    p
}

fn mediant_weights(vertices: &[Point]) -> (Point, Vec<Rational>) {
    let dens: Vec<BigInt> = vertices.iter().map(|v| v.denominator()).collect();
    let total: BigInt = dens.iter().sum();
    let weights: Vec<Rational> = dens
        .iter()
        .map(|d| Rational::new(d.clone(), total.clone()))
        .collect();
    (Point::combine(vertices.iter().zip(&weights)), weights)
}

/// Stellar subdivision of `Δ` at the Farey mediant of the face `F`.
pub fn blowup(delta: &SimplicialComplex, f: &Simplex) -> Result<SimplicialComplex> {
    if !delta.contains_face(f) {
        return Err(Error::NotAFace);
    }
    if f.dim() == 0 {
        return Ok(delta.clone());
    }
    let mut m = Mesh::from_complex(delta, vec![Vec::new(); delta.vertices().len()]);
    let ids: Vec<usize> = f
        .vertices()
        .iter()
        .map(|p| m.vertex_id(p).expect("face vertex"))
        .collect();
    let (p, w) = mediant_weights(f.vertices());
    m.star(&ids, p, &w);
    Ok(m.to_complex().0)
}

/// A regular triangulation of the union of the family in which every
/// member is a union of simplices.
pub fn joint_refinement(family: &[Polyhedron]) -> Result<RegularTriangulation> {
    let parts: Vec<Polytope> = family.iter().flat_map(|p| p.parts().iter().cloned()).collect();
    if parts.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut m = box_mesh_around(&parts);
    for r in &parts {
        m.carve(r, &Space::Domain);
    }
    m.restrict_to(&parts);
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    RegularTriangulation::certify(m.to_complex().0)
}

pub(crate) fn box_mesh_around(parts: &[Polytope]) -> Mesh {
    let pts: Vec<&Point> = parts.iter().flat_map(|r| r.vertices()).collect();
    let (lo, hi) = integer_hull_box(&pts);
    Mesh::integer_box(&lo, &hi)
}

/// Adds `y` as a vertex and restores regularity locally.
pub fn insert_vertex(delta: &RegularTriangulation, y: &Point) -> Result<RegularTriangulation> {
    if delta.vertex_index(y).is_some() {
        return Ok(delta.clone());
    }
    let mut m = Mesh::from_complex(delta, vec![Vec::new(); delta.vertices().len()]);
    m.insert_point(y)?;
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    RegularTriangulation::certify(m.to_complex().0)
}

/// Kuhn triangulation of `[0,1]ⁿ`: one simplex per coordinate ordering.
pub fn triangulate_cube(n: usize) -> Result<RegularTriangulation> {
    if !(1..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let m = Mesh::integer_box(&vec![BigInt::zero(); n], &vec![BigInt::one(); n]);
    RegularTriangulation::certify(m.to_complex().0)
}

/// Checks that any two maximal simplices meet in a common face: the
/// intersection is a face of each, and two faces with the same point set
/// have the same vertices.
pub fn is_valid_complex(c: &SimplicialComplex) -> bool {
    let polys: Vec<Polytope> = c.maximal_simplices().iter().map(|s| s.to_polytope()).collect();
    let pts: Vec<Vec<Point>> = (0..c.simplices().len()).map(|i| c.simplex_points(i)).collect();
    let boxes: Vec<_> = pts.iter().map(|p| bbox(p)).collect();
    let meets = |a: usize, b: usize| -> bool {
        let hs = polys[b].halfspaces();
        let cons: Vec<(&HalfSpace, bool)> = hs
            .inequalities
            .iter()
            .map(|h| (h, false))
            .chain(hs.equalities.iter().map(|h| (h, true)))
            .collect();
        let g: Vec<Vec<Rational>> = pts[a]
            .iter()
            .map(|p| cons.iter().map(|(h, _)| h.eval(&p.0)).collect())
            .collect();
        meets_in_face(&g, &cons)
    };
    (0..pts.len()).tuple_combinations().all(|(a, b)| {
        !boxes_overlap(&boxes[a], &boxes[b]) || (meets(a, b) && meets(b, a))
    })
}
