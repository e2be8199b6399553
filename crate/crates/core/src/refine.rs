//! Common refinement of a triangulation against the pullback of another
//! triangulation along a piecewise-affine map.
//!
//! Each full-dimensional piece `{x ∈ C : f_C(x) ∈ τ}` is computed by vertex
//! enumeration and triangulated by pulling from its lexicographically
//! smallest vertex. Pulling triangulations restrict to pulling
//! triangulations on faces, so the pieces glue face to face.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Zero;

use crate::frame::{Frame, Grid};
use crate::linalg::{dot, rank, rref, to_rational, Rational};
use crate::mesh::Mesh;
use crate::point::{Point, Vector};
use crate::polytope::{hull_to_halfspaces, triangulate_polytope};
use crate::simplex::Simplex;
use crate::triangulation::SimplicialComplex;
use crate::zmap::AffinePiece;

/// `normal · x ≥ offset`.
pub(crate) type Constraint = (Vector, Rational);

/// A full-dimensional piece of the refinement: the domain cell, the target
/// simplex, and the piece's vertices.
pub(crate) struct Piece {
    pub cell: usize,
    pub target: usize,
    pub vertices: Vec<Point>,
}

fn constraints_of(points: &[Point]) -> Option<Vec<Constraint>> {
    let p = hull_to_halfspaces(points).ok()?;
    if !p.halfspaces().equalities.is_empty() {
        return None;
    }
    Some(
        p.halfspaces()
            .inequalities
            .iter()
            .map(|h| (h.normal_rational(), to_rational(&h.offset)))
            .collect(),
    )
}

/// Inequalities of the hull of `points`, equalities split in two.
pub(crate) fn polytope_constraints(points: &[Point]) -> crate::error::Result<Vec<Constraint>> {
    let p = hull_to_halfspaces(points)?;
    let h = p.halfspaces();
    let mut out: Vec<Constraint> = h
        .inequalities
        .iter()
        .map(|h| (h.normal_rational(), to_rational(&h.offset)))
        .collect();
    for e in &h.equalities {
        let a = e.normal_rational();
        let b = to_rational(&e.offset);
        out.push((a.iter().map(|x| -x).collect(), -b.clone()));
        out.push((a, b));
    }
    Ok(out)
}

fn satisfies(c: &[Constraint], x: &[Rational]) -> bool {
    c.iter().all(|(a, b)| dot(a, x) >= *b)
}

/// Vertices of `{x ∈ ℝⁿ : every constraint holds}`, assumed bounded.
pub(crate) fn enumerate_vertices(cons: &[Constraint], n: usize) -> Vec<Point> {
    let mut out: BTreeSet<Point> = BTreeSet::new();
    for idx in (0..cons.len()).combinations(n) {
        let mut m: Vec<Vector> = idx
            .iter()
            .map(|&i| {
                let mut r = cons[i].0.clone();
                r.push(cons[i].1.clone());
                r
            })
            .collect();
        if rref(&mut m, n).len() < n {
            continue;
        }
        let x: Vec<Rational> = (0..n).map(|i| m[i][n].clone()).collect();
        if satisfies(cons, &x) {
            out.insert(Point(x));
        }
    }
    out.into_iter().collect()
}

fn barycenter(points: &[Point]) -> Point {
    let k = to_rational(&points.len().into());
    Point(
        (0..points[0].dim())
            .map(|i| points.iter().map(|p| &p.0[i]).sum::<Rational>() / &k)
            .collect(),
    )
}

fn full_dimensional(points: &[Point], n: usize) -> bool {
    if points.len() <= n {
        return false;
    }
    let rows: Vec<Vector> = points[1..].iter().map(|p| p.minus(&points[0])).collect();
    rank(&rows, n) == n
}

fn pull_back(c: &Constraint, f: &AffinePiece) -> Constraint {
    // a·(λ₀ + Λx) ≥ b  ⇔  (aᵀΛ)·x ≥ b − a·λ₀
    let n = f.simplex().ambient_dim();
    let mut normal = vec![Rational::zero(); n];
    let mut offset = c.1.clone();
    for (aj, row) in c.0.iter().zip(f.coefficients()) {
        if aj.is_zero() {
            continue;
        }
        offset -= aj * to_rational(&row[0]);
        for (x, l) in normal.iter_mut().zip(&row[1..]) {
            *x += aj * to_rational(l);
        }
    }
    (normal, offset)
}

/// Pieces of `domain` refined by the pullback of `target` along the given
/// per-cell affine maps (`None` for the identity). Returns `None` when
/// either complex is not full-dimensional.
pub(crate) fn pullback_pieces(
    domain: &SimplicialComplex,
    maps: Option<&[AffinePiece]>,
    target: &SimplicialComplex,
) -> Option<Vec<Piece>> {
    if !domain.is_full_dimensional() || !target.is_full_dimensional() {
        return None;
    }
    let n = domain.ambient_dim();
    let tpoints: Vec<Vec<Point>> = (0..target.simplices().len())
        .map(|i| target.simplex_points(i))
        .collect();
    let tframes: Vec<Frame> = tpoints.iter().map(|p| Frame::new(p)).collect();
    let grid = Grid::new(&tframes);
    let mut tcons: Vec<Option<Vec<Constraint>>> = vec![None; tpoints.len()];
    let mut out = Vec::new();
    for ci in 0..domain.simplices().len() {
        let cpts = domain.simplex_points(ci);
        let images: Vec<Point> = match maps {
            Some(f) => cpts.iter().map(|p| f[ci].eval(p)).collect(),
            None => cpts.clone(),
        };
        let iframe = Frame::new(&images);
        let candidates = grid.candidates(&iframe);
        // an image inside a single target simplex needs no other piece
        {
            let centre = Frame::point(&barycenter(&images));
            let inside = candidates.iter().copied().find(|&ti| {
                if !tframes[ti].may_contain(&centre) {
                    return false;
                }
                if tcons[ti].is_none() {
                    tcons[ti] = constraints_of(&tpoints[ti]);
                }
                tcons[ti].as_ref().is_some_and(|tc| images.iter().all(|y| satisfies(tc, &y.0)))
            });
            if let Some(ti) = inside {
                out.push(Piece {
                    cell: ci,
                    target: ti,
                    vertices: cpts,
                });
                continue;
            }
        }
        let icons = constraints_of(&images);
        let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
        for ti in candidates {
            if iframe.apart(&tframes[ti]) {
                continue;
            }
            if tcons[ti].is_none() {
                tcons[ti] = Some(constraints_of(&tpoints[ti])?);
            }
            let tc = tcons[ti].as_ref().expect("just filled");
            // the image meets the simplex inside a proper face of the image
            if tc.iter().any(|(a, b)| {
                let side: Vec<Rational> = images.iter().map(|y| dot(a, &y.0)).collect();
                side.iter().all(|d| d <= b) && side.iter().any(|d| d < b)
            }) {
                continue;
            }
            if let Some(ic) = &icons {
                if ic.iter().any(|(a, b)| tpoints[ti].iter().all(|y| dot(a, &y.0) <= *b)) {
                    continue;
                }
            }
            let vertices = if images.iter().all(|y| satisfies(tc, &y.0)) {
                cpts.clone()
            } else {
                let mut cons = constraints_of(&cpts)?;
                for c in tc {
                    cons.push(match maps {
                        Some(f) => pull_back(c, &f[ci]),
                        None => c.clone(),
                    });
                }
                enumerate_vertices(&cons, n)
            };
            if full_dimensional(&vertices, n) && seen.insert(vertices.clone()) {
                out.push(Piece {
                    cell: ci,
                    target: ti,
                    vertices,
                });
            }
        }
    }
    Some(out)
}

/// Replaces the pieces of a domain cell by the whole cell when they all
/// carry the same `key`, unless that would leave a vertex of a neighbouring
/// refined cell hanging on the cell's boundary.
pub(crate) fn coarsen<K: PartialEq>(
    domain: &SimplicialComplex,
    pieces: Vec<Piece>,
    key: impl Fn(&Piece) -> K,
) -> Vec<Piece> {
    let cells = domain.simplices().len();
    let mut by_cell: Vec<Vec<Piece>> = (0..cells).map(|_| Vec::new()).collect();
    for pc in pieces {
        let c = pc.cell;
        by_cell[c].push(pc);
    }
    let cpts: Vec<Vec<Point>> = (0..cells).map(|c| domain.simplex_points(c)).collect();
    let mut refined: Vec<bool> = by_cell
        .iter()
        .map(|ps| {
            let k = ps.first().map(&key);
            ps.iter().skip(1).any(|p| Some(key(p)) != k)
        })
        .collect();
    let frames: Vec<Frame> = cpts.iter().map(|p| Frame::new(p)).collect();
    let grid = Grid::new(&frames);
    let mut queue: Vec<usize> = (0..cells).filter(|&c| refined[c]).collect();
    while let Some(c) = queue.pop() {
        let extra: BTreeSet<&Point> = by_cell[c]
            .iter()
            .flat_map(|pc| &pc.vertices)
            .filter(|v| !cpts[c].contains(v))
            .collect();
        for v in extra {
            let vf = Frame::new(std::slice::from_ref(v));
            for d in grid.candidates(&vf) {
                if !refined[d]
                    && frames[d].may_contain(&Frame::point(v))
                    && !cpts[d].contains(v)
                    && Simplex::from_sorted_unchecked(cpts[d].clone()).contains(v)
                {
                    refined[d] = true;
                    queue.push(d);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (c, mut ps) in by_cell.into_iter().enumerate() {
        if refined[c] || ps.is_empty() {
            out.extend(ps);
        } else {
            let mut first = ps.swap_remove(0);
            first.vertices = cpts[c].clone();
            out.push(first);
        }
    }
    out
}

/// Triangulates the pieces into a mesh; `value` gives the payload of a
/// vertex of a piece.
pub(crate) fn pieces_to_mesh(
    n: usize,
    pieces: &[Piece],
    value: impl Fn(&Piece, &Point) -> Vector,
) -> Mesh {
    let mut m = Mesh::new(n);
    for piece in pieces {
        let simplices = if piece.vertices.len() == n + 1 {
            vec![piece.vertices.clone()]
        } else {
            let poly = hull_to_halfspaces(&piece.vertices).expect("nonempty piece");
            triangulate_polytope(&poly)
        };
        for s in simplices {
            let mut ids: Vec<usize> = s
                .iter()
                .map(|p| match m.vertex_id(p) {
                    Some(id) => id,
                    None => m.add_vertex(p.clone(), value(piece, p)),
                })
                .collect();
            ids.sort();
            m.add_cell(ids);
        }
    }
    m
}
