//! Piecewise-affine maps with integer coefficients, stored as vertex data
//! over a regular triangulation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{det_int, integer_solve, to_rational, Rational};
use crate::mesh::{Mesh, Space, DEFAULT_BLOWUP_CAP};
use crate::point::{Point, Vector};
use crate::polyhedron::{rational_point_in_difference, Polyhedron};
use crate::polytope::{hull_to_halfspaces, Polytope};
use crate::refine::{coarsen, pieces_to_mesh, pullback_pieces};
use crate::simplex::Simplex;
use crate::triangulation::{box_mesh_around, RegularTriangulation};

/// One affine piece `x ↦ (λ₀ + λ·x)` per codomain coordinate; each row of
/// `coefficients` is `[λ₀, λ₁, …, λₙ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePiece {
    simplex: Simplex,
    coefficients: Vec<Vec<BigInt>>,
}

impl AffinePiece {
    pub fn new(simplex: Simplex, coefficients: Vec<Vec<BigInt>>) -> Self {
        AffinePiece {
            simplex,
            coefficients,
        }
    }

    /// The integer piece through the given vertex values. Fails when no
    /// integer solution exists, which only happens off regular simplices.
    pub fn interpolate(simplex: &Simplex, values: &[Point]) -> Result<Self> {
        let w: Vec<Vec<BigInt>> = simplex.vertices().iter().map(|v| v.homogeneous().0).collect();
        let m = values[0].dim();
        let mut coefficients = Vec::with_capacity(m);
        for j in 0..m {
            let b: Option<Vec<BigInt>> = simplex
                .vertices()
                .iter()
                .zip(values)
                .map(|(v, f)| {
                    let x = &f.0[j] * to_rational(&v.denominator());
                    x.is_integer().then(|| x.to_integer())
                })
                .collect();
            let sol = b.and_then(|b| integer_solve(&w, &b));
            let Some(mut l) = sol else {
                return Err(Error::IntegralityFailure {
                    simplex: format_simplex(simplex),
                });
            };
            let l0 = l.pop().expect("homogeneous column");
            l.insert(0, l0);
            coefficients.push(l);
        }
        Ok(AffinePiece {
            simplex: simplex.clone(),
            coefficients,
        })
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn coefficients(&self) -> &[Vec<BigInt>] {
        &self.coefficients
    }

    pub fn codomain_dim(&self) -> usize {
        self.coefficients.len()
    }

    /// Linear part of codomain coordinate `j`.
    pub fn linear(&self, j: usize) -> Vector {
        self.coefficients[j][1..].iter().map(to_rational).collect()
    }

    /// Coefficient rows of `self ∘ inner`.
    fn after(&self, inner: &AffinePiece) -> Vec<Vec<BigInt>> {
        self.coefficients
            .iter()
            .map(|row| {
                let mut out = vec![row[0].clone()];
                out.resize(inner.coefficients[0].len(), BigInt::from(0));
                for (l, inner_row) in row[1..].iter().zip(&inner.coefficients) {
                    for (o, c) in out.iter_mut().zip(inner_row) {
                        *o += l * c;
                    }
                }
                out
            })
            .collect()
    }

    pub fn eval(&self, x: &Point) -> Point {
        Point(
            self.coefficients
                .iter()
                .map(|row| {
                    row[1..]
                        .iter()
                        .zip(&x.0)
                        .fold(to_rational(&row[0]), |acc, (l, c)| acc + c * to_rational(l))
                })
                .collect(),
        )
    }
}

fn format_simplex(s: &Simplex) -> String {
    let parts: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMap {
    domain: RegularTriangulation,
    codomain_dim: usize,
    values: Vec<Point>,
    pieces: Vec<AffinePiece>,
}

/// The unique map affine on each simplex of `domain` taking the given
/// values at the vertices (listed in vertex order).
pub fn extend_vertex_map(domain: RegularTriangulation, values: Vec<Point>) -> Result<ZMap> {
    let m = values.first().map_or(0, |v| v.dim());
    for (v, f) in domain.vertices().iter().zip(&values) {
        if f.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: f.dim(),
            });
        }
        if !v.denominator().is_multiple_of(&f.denominator()) {
            return Err(Error::DenominatorViolation {
                vertex: v.to_string(),
            });
        }
    }
    let pieces = (0..domain.simplices().len())
        .map(|i| {
            let vals: Vec<Point> = domain.simplices()[i].iter().map(|&v| values[v].clone()).collect();
            AffinePiece::interpolate(&domain.simplex(i), &vals)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZMap {
        domain,
        codomain_dim: m,
        values,
        pieces,
    })
}

impl ZMap {
    /// `extend_vertex_map` with values computed from each vertex.
    pub fn from_fn(domain: RegularTriangulation, f: impl Fn(&Point) -> Point) -> Result<ZMap> {
        let values = domain.vertices().iter().map(f).collect();
        extend_vertex_map(domain, values)
    }

    pub fn identity(domain: RegularTriangulation) -> ZMap {
        ZMap::from_fn(domain, |p| p.clone()).expect("identity is a Z-map")
    }

    pub fn constant(domain: RegularTriangulation, c: &Point) -> Result<ZMap> {
        ZMap::from_fn(domain, |_| c.clone())
    }

    pub fn domain(&self) -> &RegularTriangulation {
        &self.domain
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    /// Values at the domain vertices, in vertex order.
    pub fn values(&self) -> &[Point] {
        &self.values
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn carrier(&self) -> Polyhedron {
        self.domain.carrier()
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                found: x.dim(),
            });
        }
        let i = self
            .domain
            .locate(x)
            .ok_or_else(|| Error::OutsideDomain(x.to_string()))?;
        Ok(self.pieces[i].eval(x))
    }

    /// Union of the images of the maximal simplices.
    pub fn image(&self) -> Polyhedron {
        Polyhedron::new(
            self.domain
                .simplices()
                .iter()
                .map(|s| {
                    let pts: Vec<Point> = s.iter().map(|&v| self.values[v].clone()).collect();
                    hull_to_halfspaces(&pts).expect("nonempty")
                })
                .collect(),
        )
    }

    pub fn is_into(&self, t: &Polyhedron) -> bool {
        self.image().is_subset_of(t)
    }

    /// Mesh over the domain carrying the values as payload.
    pub(crate) fn to_mesh(&self) -> Mesh {
        Mesh::from_complex(
            &self.domain,
            self.values.iter().map(|v| v.0.clone()).collect(),
        )
    }

    /// Regularizes a mesh whose payload is a piecewise-linear Z-map and
    /// reads it back.
    pub(crate) fn from_mesh(mut m: Mesh) -> Result<ZMap> {
        m.regularize(DEFAULT_BLOWUP_CAP)?;
        let (c, payload) = m.to_complex();
        let domain = RegularTriangulation::certify(c)?;
        extend_vertex_map(domain, payload.into_iter().map(Point).collect())
    }

    fn piece_containing(&self, pts: &[Point]) -> Option<usize> {
        let first = self.domain.locate(&pts[0])?;
        let contains_all = |i: usize| {
            let s = self.domain.simplex(i);
            pts.iter().all(|p| s.contains(p))
        };
        if contains_all(first) {
            return Some(first);
        }
        (0..self.domain.simplices().len()).find(|&i| contains_all(i))
    }

    /// Sum of `|det|` of the maximal simplices; proportional to the volume
    /// for full-dimensional complexes.
    fn scaled_volume(&self) -> Rational {
        self.domain
            .maximal_simplices()
            .iter()
            .map(|s| {
                let v = s.vertices();
                let rows: Vec<Vec<Rational>> = v[1..].iter().map(|p| p.minus(&v[0])).collect();
                rational_det(rows).abs()
            })
            .sum()
    }
}

fn rational_det(rows: Vec<Vec<Rational>>) -> Rational {
    let d = crate::linalg::lcm_all(rows.iter().flatten().map(|x| x.denom()));
    let dq = to_rational(&d);
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &dq).to_integer()).collect())
        .collect();
    let n = ints.len() as u32;
    to_rational(&det_int(ints)) / to_rational(&num_traits::pow(d, n as usize))
}

/// `g ∘ f`.
pub fn compose(g: &ZMap, f: &ZMap) -> Result<ZMap> {
    if f.codomain_dim != g.domain_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.domain_dim(),
            found: f.codomain_dim,
        });
    }
    if f.values.iter().any(|v| !g.domain.contains_point(v)) {
        return Err(Error::ImageEscapesDomain);
    }
    if g.domain_dim() == 1 {
        let mut m = f.to_mesh();
        let mut breaks: Vec<&Rational> = g.domain.vertices().iter().map(|v| &v.0[0]).collect();
        breaks.sort();
        for t in breaks {
            m.farey_cut(|_, y| &y[0] - t, DEFAULT_BLOWUP_CAP)?;
        }
        for v in 0..m.points.len() {
            let y = g.evaluate(&Point(m.payload[v].clone()))?;
            m.payload[v] = y.0;
        }
        return ZMap::from_mesh(m);
    }
    if let Some(pieces) = pullback_pieces(&f.domain, Some(&f.pieces), &g.domain) {
        let pieces = coarsen(&f.domain, pieces, |pc| g.pieces[pc.target].after(&f.pieces[pc.cell]));
        let m = pieces_to_mesh(f.domain_dim(), &pieces, |pc, x| {
            g.pieces[pc.target].eval(&f.pieces[pc.cell].eval(x)).0
        });
        return ZMap::from_mesh(m);
    }
    let width = f.codomain_dim;
    let mut m = f.to_mesh();
    for tau in g.domain.maximal_simplices() {
        m.carve(&tau.to_polytope(), &Space::Payload(0..width));
    }
    let mut vals: HashMap<usize, Vector> = HashMap::new();
    for cid in m.live_cells() {
        let ids = m.cell(cid).expect("live").to_vec();
        let images: Vec<Point> = ids.iter().map(|&v| Point(m.payload[v].clone())).collect();
        let tau = g.piece_containing(&images).ok_or(Error::ImageEscapesDomain)?;
        for (&v, y) in ids.iter().zip(&images) {
            vals.entry(v).or_insert_with(|| g.pieces[tau].eval(y).0);
        }
    }
    for (v, y) in vals {
        m.payload[v] = y;
    }
    ZMap::from_mesh(m)
}

/// Whether two maps on the same carrier agree everywhere.
pub fn equals(f: &ZMap, g: &ZMap) -> Result<bool> {
    if f.codomain_dim != g.codomain_dim || f.domain_dim() != g.domain_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.codomain_dim,
            found: g.codomain_dim,
        });
    }
    let same_carrier = if f.domain.is_full_dimensional() && g.domain.is_full_dimensional() {
        f.scaled_volume() == g.scaled_volume()
    } else {
        g.carrier().is_subset_of(&f.carrier())
    };
    if !same_carrier {
        return Err(Error::CarrierMismatch);
    }
    if let Some(pieces) = pullback_pieces(&f.domain, None, &g.domain) {
        return Ok(pieces
            .iter()
            .all(|pc| f.pieces[pc.cell].coefficients == g.pieces[pc.target].coefficients));
    }
    let mut m = f.to_mesh();
    for tau in g.domain.maximal_simplices() {
        m.carve(&tau.to_polytope(), &Space::Domain);
    }
    let mut agree = true;
    for cid in m.live_cells() {
        let pts = m.cell_points(cid);
        let tau = g.piece_containing(&pts).ok_or(Error::CarrierMismatch)?;
        let ids = m.cell(cid).expect("live");
        if agree {
            agree = ids
                .iter()
                .zip(&pts)
                .all(|(&v, p)| m.payload[v] == g.pieces[tau].eval(p).0);
        }
    }
    Ok(agree)
}

pub fn is_into(g: &ZMap, t: &Polyhedron) -> bool {
    g.is_into(t)
}

/// The same function on the subpolyhedron `r`.
pub fn restrict(g: &ZMap, r: &Polyhedron) -> Result<ZMap> {
    if !r.is_subset_of(&g.carrier()) {
        return Err(Error::OutsideDomain("restriction target".into()));
    }
    let mut m = g.to_mesh();
    for part in r.parts() {
        m.carve(part, &Space::Domain);
    }
    m.restrict_to(r.parts());
    ZMap::from_mesh(m)
}

/// Extends `eta: P → ℝ` to `Q ⊋ P` so that the integer `z` is a value:
/// every vertex outside `P` of a triangulation refining `Q`, the pieces of
/// `eta` and a point of `Q ∖ P` is sent to `z`.
pub fn extend_with_value(eta: &ZMap, q: &Polyhedron, z: &BigInt) -> Result<ZMap> {
    if eta.codomain_dim != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: eta.codomain_dim,
        });
    }
    let p = eta.carrier();
    if !p.is_subset_of(q) {
        return Err(Error::OutsideHierarchy);
    }
    if q.is_subset_of(&p) {
        return Err(Error::NotStrict);
    }
    let s = rational_point_in_difference(q, &p)?;
    let mut parts: Vec<Polytope> = q.parts().to_vec();
    parts.extend(p.parts().iter().cloned());
    parts.push(hull_to_halfspaces(&[s]).expect("point"));
    let mut m = box_mesh_around(&parts);
    for r in &parts {
        m.carve(r, &Space::Domain);
    }
    m.restrict_to(q.parts());
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    let domain = RegularTriangulation::certify(m.to_complex().0)?;
    let zq = Point(vec![to_rational(z)]);
    let values = domain
        .vertices()
        .iter()
        .map(|v| match eta.domain.locate(v) {
            Some(i) => eta.pieces[i].eval(v),
            None => zq.clone(),
        })
        .collect();
    extend_vertex_map(domain, values)
}
