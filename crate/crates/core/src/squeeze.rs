//! Squeezing a simplex onto itself along a level set, and the resulting
//! upper bounds for maps into the line.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, dot_int, lcm_all, next_prime_above, nullspace, to_rational, Rational};
use crate::mesh::{Mesh, Space, DEFAULT_BLOWUP_CAP};
use crate::point::{Point, Vector};
use crate::polytope::HalfSpaceSystem;
use crate::simplex::{barycentric, Simplex};
use crate::triangulation::RegularTriangulation;
use crate::frame::Frame;
use crate::refine::{enumerate_vertices, polytope_constraints, Constraint};
use crate::zmap::{extend_vertex_map, AffinePiece, ZMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqueezeContext {
    pub s: Simplex,
    pub f: Simplex,
    pub eta: AffinePiece,
    /// Describes `s`; inequality 0 is the one vanishing on `f`.
    pub system: HalfSpaceSystem,
}

impl SqueezeContext {
    pub fn new(s: Simplex, f: Simplex, eta: AffinePiece) -> Result<Self> {
        if s.dim() < 2 {
            return Err(Error::DimensionTooLow(format!(
                "simplex of dimension {} cannot be squeezed",
                s.dim()
            )));
        }
        if f.dim() + 1 != s.dim() || !f.is_face_of(&s) {
            return Err(Error::PreconditionViolated("not a facet of the simplex".into()));
        }
        if eta.codomain_dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: eta.codomain_dim(),
            });
        }
        let vals: Vec<Point> = f.vertices().iter().map(|v| eta.eval(v)).collect();
        if vals.iter().all(|x| *x == vals[0]) {
            return Err(Error::ConstantOnFace);
        }
        let mut system = s.to_polytope().halfspaces().clone();
        let i = system
            .inequalities
            .iter()
            .position(|h| f.vertices().iter().all(|v| h.eval(&v.0).is_zero()))
            .expect("a facet has a defining inequality");
        system.inequalities.swap(0, i);
        Ok(SqueezeContext { s, f, eta, system })
    }
}

/// The output of [`squeeze_witnessed`]: `rho` collapses `y` onto `z`.
#[derive(Clone, Debug)]
pub struct Squeezed {
    pub rho: ZMap,
    pub y: Point,
    pub z: Point,
}

fn den_vector(v: &[Rational]) -> BigInt {
    lcm_all(v.iter().map(|x| x.denom()))
}

/// Rational `δ, τ ∈ (0, ε)` with `den(t + δv) = den(t + δv + τw)`.
pub fn equal_denominator_points(
    t: &Point,
    v: &[Rational],
    w: &[Rational],
    eps: &Rational,
) -> Result<(Rational, Rational)> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroDirection);
    }
    if !eps.is_positive() {
        return Err(Error::PreconditionViolated("ε must be positive".into()));
    }
    let a = den_vector(v);
    let mut b = den_vector(w);
    let scaled = |k: &BigInt, u: &[Rational]| -> Vec<BigInt> {
        u.iter().map(|x| (x * to_rational(k)).to_integer()).collect()
    };
    let vp = scaled(&a, v);
    let mut wp = scaled(&b, w);
    let mut sum: Vec<BigInt> = vp.iter().zip(&wp).map(|(x, y)| x + y).collect();
    if sum.iter().all(Zero::is_zero) {
        b *= 2;
        wp = scaled(&b, w);
        sum = vp.iter().zip(&wp).map(|(x, y)| x + y).collect();
    }
    // δ·v = v′/p needs δ = a/p, so p also has to clear a/ε and b/ε
    let mut bound = t.denominator();
    for q in [
        eps.recip(),
        to_rational(&a) / eps,
        to_rational(&b) / eps,
    ] {
        bound = bound.max(q.floor().to_integer());
    }
    for x in vp.iter().chain(&sum) {
        bound = bound.max(x.abs());
    }
    let p = next_prime_above(&bound);
    let q = Rational::new(BigInt::one(), p);
    Ok((&q * to_rational(&a), &q * to_rational(&b)))
}

/// `ε > 0` such that `t + Σ δⱼ wⱼ` lies in the relative interior of `s`
/// whenever every `δⱼ ∈ (0, ε)`.
pub fn interior_step(s: &Simplex, t: &Point, directions: &[Vector]) -> Result<Rational> {
    let system = s.to_polytope().halfspaces().clone();
    if !system.contains(&t.0) {
        return Err(Error::PreconditionViolated(format!("{t} is outside the simplex")));
    }
    for h in &system.equalities {
        if directions.iter().any(|w| !dot_int(&h.normal, w).is_zero()) {
            return Err(Error::PreconditionViolated("direction not parallel to the simplex".into()));
        }
    }
    let l = to_rational(&BigInt::from(directions.len()));
    let mut eps: Option<Rational> = None;
    for h in &system.inequalities {
        let slack = h.eval(&t.0);
        let products: Vec<Rational> = directions.iter().map(|w| dot_int(&h.normal, w)).collect();
        if slack.is_zero() {
            if products.iter().any(Signed::is_negative) || !products.iter().any(Signed::is_positive) {
                return Err(Error::PreconditionViolated(
                    "a direction leaves the simplex through an active facet".into(),
                ));
            }
        } else if !directions.is_empty() {
            let m = products.iter().map(|x| x.abs()).max().expect("nonempty");
            let e = slack / (&l * m + Rational::one());
            eps = Some(match eps {
                Some(old) if old <= e => old,
                _ => e,
            });
        }
    }
    Ok(eps.unwrap_or_else(Rational::one))
}

/// A direction parallel to `s`, along which `eta` is constant, pointing
/// from `f` into `s`.
pub fn squeezing_direction(ctx: &SqueezeContext) -> Result<Vector> {
    let n = ctx.s.ambient_dim();
    let mut rows: Vec<Vector> = ctx
        .system
        .equalities
        .iter()
        .map(|h| h.normal_rational())
        .collect();
    rows.push(ctx.eta.linear(0));
    let a0 = ctx.system.inequalities[0].normal_rational();
    for w in nullspace(&rows, n) {
        let p = dot(&a0, &w);
        if p.is_positive() {
            return Ok(w);
        }
        if p.is_negative() {
            return Ok(w.into_iter().map(|x| -x).collect());
        }
    }
    Err(Error::ConstantOnFace)
}

/// The points `y` in the relative interior of `f` and `z` in the relative
/// interior of `s` with `den(y) = den(z)` and `eta(y) = eta(z)`.
pub fn squeeze_points(ctx: &SqueezeContext) -> Result<(Point, Point)> {
    let f = ctx.f.vertices();
    let t = ctx.f.barycenter();
    let v = f[1].minus(&f[0]);
    let w = squeezing_direction(ctx)?;
    let e1 = interior_step(&ctx.f, &t, std::slice::from_ref(&v))?;
    let e2 = interior_step(&ctx.s, &t, &[v.clone(), w.clone()])?;
    let eps = e1.min(e2);
    let (delta, tau) = equal_denominator_points(&t, &v, &w, &eps)?;
    let y = t.translate(&v.iter().map(|x| x * &delta).collect::<Vec<_>>());
    let z = y.translate(&w.iter().map(|x| x * &tau).collect::<Vec<_>>());
    Ok((y, z))
}

/// A Z-map `ρ: S → S` with `η∘ρ = η`, identity on the facets other than
/// `F`, missing the point `y`.
pub fn squeeze_witnessed(ctx: &SqueezeContext) -> Result<Squeezed> {
    let (y, z) = squeeze_points(ctx)?;
    let mut m = Mesh::new(ctx.s.ambient_dim());
    let ids: Vec<usize> = ctx
        .s
        .vertices()
        .iter()
        .map(|p| m.add_vertex(p.clone(), Vec::new()))
        .collect();
    m.add_cell(ids);
    m.insert_point(&y)?;
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    let domain = RegularTriangulation::certify(m.to_complex().0)?;
    let rho = collapse(domain, &y, &z)?;
    Ok(Squeezed { rho, y, z })
}

pub fn squeeze(ctx: &SqueezeContext) -> Result<ZMap> {
    Ok(squeeze_witnessed(ctx)?.rho)
}

/// Identity on every vertex except `y ↦ z`.
fn collapse(domain: RegularTriangulation, y: &Point, z: &Point) -> Result<ZMap> {
    let values = domain
        .vertices()
        .iter()
        .map(|v| if v == y { z.clone() } else { v.clone() })
        .collect();
    extend_vertex_map(domain, values)
}

/// The output of [`make_space_witnessed`].
#[derive(Clone, Debug)]
pub struct MadeSpace {
    pub alpha: ZMap,
    /// A point of the cube missed by `alpha`.
    pub y: Point,
    pub z: Point,
    pub context: SqueezeContext,
}

fn on_cube_boundary(pts: &[Point]) -> bool {
    let n = pts[0].dim();
    (0..n).any(|i| {
        [Rational::zero(), Rational::one()]
            .iter()
            .any(|c| pts.iter().all(|p| &p.0[i] == c))
    })
}

/// The squeezing context on the boundary facet of least denominator (ties
/// broken lexicographically) where `eta` is not constant.
fn boundary_context(eta: &ZMap) -> Result<SqueezeContext> {
    let n = eta.domain_dim();
    if n <= 1 {
        return Err(Error::DimensionTooLow(format!(
            "cannot make space in dimension {n}"
        )));
    }
    if eta.codomain_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: eta.codomain_dim(),
        });
    }
    let dom = eta.domain();
    let vals = eta.values();
    let mut best: Option<(BigInt, Vec<Point>, Vec<usize>)> = None;
    for face in dom.all_faces() {
        if face.len() != n {
            continue;
        }
        let pts: Vec<Point> = face.iter().map(|&i| dom.vertices()[i].clone()).collect();
        if !on_cube_boundary(&pts) || face.iter().all(|&i| vals[i] == vals[face[0]]) {
            continue;
        }
        let den = lcm_all(pts.iter().map(|p| p.denominator()).collect::<Vec<_>>().iter());
        if best.as_ref().map_or(true, |(d, p, _)| (&den, &pts) < (d, p)) {
            best = Some((den, pts, face));
        }
    }
    if let Some((_, pts, face)) = best {
        let si = dom
            .simplices()
            .iter()
            .position(|s| face.iter().all(|v| s.binary_search(v).is_ok()))
            .expect("every face lies in a maximal simplex");
        let f = Simplex::new(pts)?;
        return SqueezeContext::new(dom.simplex(si), f, eta.pieces()[si].clone());
    }
    Err(Error::ConstantOnBoundary)
}

/// A non-surjective `α: [0,1]ⁿ → [0,1]ⁿ` with `η∘α = η`.
pub fn make_space_witnessed(eta: &ZMap) -> Result<MadeSpace> {
    let context = boundary_context(eta)?;
    let (y, z) = squeeze_points(&context)?;
    // y is interior to a boundary facet, so only the chosen simplex is starred
    let mut m = Mesh::from_complex(eta.domain(), vec![Vec::new(); eta.domain().vertices().len()]);
    m.insert_point(&y)?;
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    let domain = RegularTriangulation::certify(m.to_complex().0)?;
    let alpha = collapse(domain, &y, &z)?;
    Ok(MadeSpace {
        alpha,
        y,
        z,
        context,
    })
}

pub fn make_space(eta: &ZMap) -> Result<ZMap> {
    Ok(make_space_witnessed(eta)?.alpha)
}

/// `(θ, α)` with `θ∘α = η` and the integer `z` a value of `θ`.
pub fn exists_upper_bound(eta: &ZMap, z: &BigInt) -> Result<(ZMap, ZMap)> {
    let made = make_space_witnessed(eta)?;
    let theta = match bump_extension(eta, &made, z)? {
        Some(theta) => theta,
        None => carved_extension(eta, &made.alpha, z)?,
    };
    Ok((theta, made.alpha))
}

/// Builds `θ` as `η` everywhere except for a bump of height `z` at `y`.
/// The star of `y` is first shrunk into the region missed by `α`: a vertex
/// `c = y + e/(k·den(y))` with `e` integral and `e_j = ±1` across the
/// boundary facet makes every cell `conv(y, g, c)` over a boundary ridge
/// `g` regular, and the rest of the old star is coned from `c`. `None` if
/// no `k` up to the limit works.
fn bump_extension(eta: &ZMap, made: &MadeSpace, zval: &BigInt) -> Result<Option<ZMap>> {
    const DOUBLINGS: u32 = 40;
    let y = &made.y;
    let alpha = &made.alpha;
    let mut base = eta.to_mesh();
    let yi = base.insert_point(y)?;
    base.regularize(DEFAULT_BLOWUP_CAP)?;
    let n = y.dim();
    let images: Vec<(Frame, Vec<Constraint>)> = (0..alpha.domain().simplices().len())
        .map(|i| {
            let pts: Vec<Point> = alpha.domain().simplices()[i]
                .iter()
                .map(|&v| alpha.values()[v].clone())
                .collect();
            Ok((Frame::new(&pts), polytope_constraints(&pts)?))
        })
        .collect::<Result<_>>()?;
    let meets_off_link = |cell: &[Point]| -> bool {
        let bx = Frame::new(cell);
        let k = cell.iter().position(|p| p == y).expect("star cell");
        let own = polytope_constraints(cell).expect("cell");
        images.iter().any(|(ib, ic)| {
            if bx.apart(ib) {
                return false;
            }
            let mut cons = own.clone();
            cons.extend(ic.iter().cloned());
            enumerate_vertices(&cons, n).iter().any(|x| {
                barycentric(cell, x).is_some_and(|l| !l[k].is_zero())
            })
        })
    };
    let settled = |m: &Mesh| {
        !m.cells_containing(&[yi])
            .iter()
            .any(|&c| meets_off_link(&m.cell_points(c)))
    };
    let mut found = None;
    if settled(&base) {
        found = Some(base);
    } else {
        let Some((j, side)) = (0..n).find_map(|j| {
            [Rational::zero(), Rational::one()]
                .into_iter()
                .find(|s| y.0[j] == *s)
                .map(|s| (j, s))
        }) else {
            return Ok(None);
        };
        let inward = if side.is_zero() { Rational::one() } else { -Rational::one() };
        let d = made.z.minus(y);
        let scale = d[j].abs();
        let e: Vector = (0..n)
            .map(|i| {
                if i == j {
                    inward.clone()
                } else {
                    (&d[i] / &scale + Rational::new(BigInt::one(), BigInt::from(2))).floor()
                }
            })
            .collect();
        let dy = to_rational(&y.denominator());
        let mut k = Rational::one();
        for _ in 0..DOUBLINGS {
            let step = (&k * &dy).recip();
            let c = y.translate(&e.iter().map(|x| x * &step).collect::<Vec<_>>());
            if let Some(m) = cone_from(&base, yi, &c, j, &side)? {
                if settled(&m) {
                    found = Some(m);
                    break;
                }
            }
            k *= Rational::from_integer(BigInt::from(2));
        }
    }
    let Some(mut m) = found else {
        return Ok(None);
    };
    // concentric rings of Farey blow-ups with integer values one apart, so
    // every new cell maps into a single interval [k, k+1]
    let target = to_rational(zval);
    let here = m.payload[yi][0].clone();
    let mut levels: Vec<Rational> = Vec::new();
    if target >= here {
        let mut k = here.ceil();
        while k < target {
            levels.push(k.clone());
            k += Rational::one();
        }
    } else {
        let mut k = here.floor();
        while k > target {
            levels.push(k.clone());
            k -= Rational::one();
        }
    }
    for level in levels {
        for v in link_of(&m, yi) {
            let pid = blow_edge(&mut m, yi, v);
            m.payload[pid] = vec![level.clone()];
        }
    }
    m.payload[yi] = vec![target];
    let (c, payload) = m.to_complex();
    let domain = RegularTriangulation::certify(c)?;
    Ok(Some(extend_vertex_map(domain, payload.into_iter().map(Point).collect())?))
}

/// Re-triangulates the star of `yi` with the extra vertex `c`: cones over
/// the link from `c` and cells `conv(y, g, c)` over the ridges `g` of the
/// star lying in the facet `x_j = side`, then regularizes away from `y`.
fn cone_from(base: &Mesh, yi: usize, c: &Point, j: usize, side: &Rational) -> Result<Option<Mesh>> {
    let mut m = base.clone();
    let star = m.cells_containing(&[yi]);
    let mut payload = None;
    for &cid in &star {
        let ids = m.cell(cid).expect("live").to_vec();
        let pts = m.cell_points(cid);
        let k = ids.iter().position(|&v| v == yi).expect("star cell");
        let Some(l) = barycentric(&pts, c) else {
            return Ok(None);
        };
        if !l[k].is_positive() {
            return Ok(None);
        }
        payload.get_or_insert_with(|| {
            let width = m.payload[ids[0]].len();
            (0..width)
                .map(|t| ids.iter().zip(&l).map(|(&v, w)| w * &m.payload[v][t]).sum())
                .collect::<Vector>()
        });
    }
    let ci = m.add_vertex(c.clone(), payload.expect("nonempty star"));
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &cid in &star {
        let link: Vec<usize> = m.cell(cid).expect("live").iter().copied().filter(|&v| v != yi).collect();
        let mut cone = link.clone();
        cone.push(ci);
        cone.sort();
        cells.insert(cone);
        for skip in 0..link.len() {
            let g: Vec<usize> = link
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            if g.iter().all(|&v| m.points[v].0[j] == *side) {
                let mut cell = g;
                cell.push(yi);
                cell.push(ci);
                cell.sort();
                cells.insert(cell);
            }
        }
    }
    m.swap_cells(&star, cells.into_iter().collect());
    match m.regularize(DEFAULT_BLOWUP_CAP) {
        Ok(()) => Ok(Some(m)),
        Err(Error::BlowupLimit(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Vertices adjacent to `yi`, in point order.
fn link_of(m: &Mesh, yi: usize) -> Vec<usize> {
    let mut nbrs: Vec<usize> = m
        .cells_containing(&[yi])
        .iter()
        .flat_map(|&c| m.cell(c).expect("live").to_vec())
        .filter(|&v| v != yi)
        .collect();
    nbrs.sort_by(|a, b| m.points[*a].cmp(&m.points[*b]));
    nbrs.dedup();
    nbrs
}

/// Stars the edge `[a, b]` at its Farey mediant.
fn blow_edge(m: &mut Mesh, a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    let da = to_rational(&m.points[a].denominator());
    let db = to_rational(&m.points[b].denominator());
    let total = &da + &db;
    let w = [da / &total, db / total];
    let p = Point::combine([(&m.points[a], &w[0]), (&m.points[b], &w[1])]);
    m.star(&[a, b], p, &w).0
}

/// Fallback: refine `η` against the image of `α` directly.
fn carved_extension(eta: &ZMap, alpha: &ZMap, z: &BigInt) -> Result<ZMap> {
    let p = alpha.image();
    let mut m = eta.to_mesh();
    for part in p.parts() {
        m.carve(part, &Space::Domain);
    }
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    let (c, _) = m.to_complex();
    let s = c
        .maximal_simplices()
        .iter()
        .map(Simplex::barycenter)
        .find(|b| !p.contains_point(b))
        .ok_or(Error::NoDifference)?;
    m.insert_point(&s)?;
    m.regularize(DEFAULT_BLOWUP_CAP)?;
    let (c, payload) = m.to_complex();
    let zq = Point(vec![to_rational(z)]);
    let values = c
        .vertices()
        .iter()
        .zip(payload)
        .map(|(v, w)| if p.contains_point(v) { Point(w) } else { zq.clone() })
        .collect();
    extend_vertex_map(RegularTriangulation::certify(c)?, values)
}
