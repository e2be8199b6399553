//! The universal cover `ζ: ℝ → 𝔅` of the boundary of the unit square,
//! lifts of maps into `𝔅`, degree, and strict generalization.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, to_rational, Rational};
use crate::point::Point;
use crate::squeeze::exists_upper_bound;
use crate::triangulation::{triangulate_cube, RegularTriangulation, SimplicialComplex};
use crate::zmap::{compose, extend_vertex_map, ZMap};

/// `ζ(x)`: unit-speed counter-clockwise wrap with `ζ(0) = (0,0)`.
pub fn zeta(x: &Rational) -> Point {
    let k = x.floor().to_integer();
    let f = x - to_rational(&k);
    let one = Rational::one();
    let zero = Rational::zero();
    let coords = match k.mod_floor(&BigInt::from(4)).to_u8().expect("residue mod 4") {
        0 => [f, zero],
        1 => [one, f],
        2 => [one - f, Rational::one()],
        _ => [zero, one - f],
    };
    Point(coords.to_vec())
}

/// `ζ` restricted to `[a, b]`, on the unit-interval triangulation.
pub fn zeta_segment(a: &BigInt, b: &BigInt) -> Result<ZMap> {
    if a >= b {
        return Err(Error::BadInterval(a.to_string(), b.to_string()));
    }
    let len = (b - a).to_usize().expect("interval length fits in memory");
    let vertices: Vec<Point> = (0..=len)
        .map(|i| Point(vec![to_rational(&(a + BigInt::from(i)))]))
        .collect();
    let simplices = (0..len).map(|i| vec![i, i + 1]).collect();
    let domain = RegularTriangulation::certify(SimplicialComplex::new(vertices, simplices)?)?;
    let values = domain.vertices().iter().map(|v| zeta(&v.0[0])).collect();
    extend_vertex_map(domain, values)
}

/// Position along the edge `e` (bottom, right, top, left), in `[e, e+1]`.
fn edge_param(e: usize, y: &Point) -> Rational {
    let (x, yy) = (&y.0[0], &y.0[1]);
    match e {
        0 => x.clone(),
        1 => int(1) + yy,
        2 => int(3) - x,
        _ => int(4) - yy,
    }
}

fn on_edge(e: usize, y: &Point) -> bool {
    let (x, yy) = (&y.0[0], &y.0[1]);
    let unit = |t: &Rational| *t >= Rational::zero() && *t <= Rational::one();
    match e {
        0 => yy.is_zero() && unit(x),
        1 => x.is_one() && unit(yy),
        2 => yy.is_one() && unit(x),
        _ => x.is_zero() && unit(yy),
    }
}

/// A lift `ℓ` of `η: [0,1]ⁿ → 𝔅` with `ζ∘ℓ = η`, normalized at the
/// lexicographically smallest vertex.
#[derive(Clone, Debug)]
pub struct Lift {
    pub map: ZMap,
    pub base_vertex: Point,
    pub base_value: Rational,
}

pub fn lift(eta: &ZMap) -> Result<Lift> {
    if eta.codomain_dim() != 2 {
        return Err(Error::NotIntoBoundary);
    }
    let dom = eta.domain();
    let vals = eta.values();
    let cells = dom.simplices();
    let edges: Vec<usize> = cells
        .iter()
        .map(|s| {
            (0..4)
                .find(|&e| s.iter().all(|&v| on_edge(e, &vals[v])))
                .ok_or(Error::NotIntoBoundary)
        })
        .collect::<Result<_>>()?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); dom.vertices().len()];
    for (ci, s) in cells.iter().enumerate() {
        for &v in s {
            incident[v].push(ci);
        }
    }
    let mut lifted: Vec<Option<Rational>> = vec![None; dom.vertices().len()];
    let base = 0;
    let first = *incident[base].first().ok_or(Error::LiftInconsistent)?;
    let four = int(4);
    let base_value = {
        let x = edge_param(edges[first], &vals[base]);
        let k = (&x / &four).floor();
        x - k * &four
    };
    lifted[base] = Some(base_value.clone());
    let mut done = vec![false; cells.len()];
    let mut queue: VecDeque<usize> = incident[base].iter().copied().collect();
    for &c in &incident[base] {
        done[c] = true;
    }
    while let Some(ci) = queue.pop_front() {
        let e = edges[ci];
        let s = &cells[ci];
        let anchor = *s
            .iter()
            .find(|&&v| lifted[v].is_some())
            .expect("cells are queued through a lifted vertex");
        let shift = lifted[anchor].as_ref().expect("anchor") - edge_param(e, &vals[anchor]);
        if !(&shift / &four).is_integer() {
            return Err(Error::LiftInconsistent);
        }
        for &v in s {
            let x = edge_param(e, &vals[v]) + &shift;
            match &lifted[v] {
                Some(old) if *old != x => return Err(Error::LiftInconsistent),
                Some(_) => {}
                None => {
                    lifted[v] = Some(x);
                    for &c in &incident[v] {
                        if !done[c] {
                            done[c] = true;
                            queue.push_back(c);
                        }
                    }
                }
            }
        }
    }
    let values: Vec<Point> = lifted
        .into_iter()
        .map(|x| x.map(|x| Point(vec![x])).ok_or(Error::LiftInconsistent))
        .collect::<Result<_>>()?;
    let map = extend_vertex_map(dom.clone(), values)?;
    Ok(Lift {
        map,
        base_vertex: dom.vertices()[base].clone(),
        base_value,
    })
}

fn value_range(f: &ZMap) -> (Rational, Rational) {
    let xs = f.values().iter().map(|v| &v.0[0]);
    let lo = xs.clone().min().expect("nonempty domain").clone();
    let hi = xs.max().expect("nonempty domain").clone();
    (lo, hi)
}

/// Length of the image of any lift of `η`.
pub fn degree(eta: &ZMap) -> Result<Rational> {
    let (lo, hi) = value_range(&lift(eta)?.map);
    Ok(hi - lo)
}

/// Whether `η` takes two distinct values on `{0,1}ⁿ`.
pub fn nonconstant_on_corners(eta: &ZMap) -> bool {
    let n = eta.domain_dim();
    let mut first: Option<Point> = None;
    for mask in 0u32..1 << n {
        let c = Point::from_ints(&(0..n).map(|i| ((mask >> i) & 1) as i64).collect::<Vec<_>>());
        let Ok(y) = eta.evaluate(&c) else {
            continue;
        };
        match &first {
            None => first = Some(y),
            Some(f) if *f != y => return true,
            Some(_) => {}
        }
    }
    false
}

/// `θ` strictly more general than `η`, with `θ∘α = padded η`.
#[derive(Clone, Debug)]
pub struct Generalized {
    pub theta: ZMap,
    pub alpha: ZMap,
    /// `η` on at least two variables.
    pub padded: ZMap,
}

/// `η` on `[0,1]^{max(2,n)}`, ignoring the extra coordinates.
pub fn pad(eta: &ZMap) -> Result<ZMap> {
    let n = eta.domain_dim();
    if n >= 2 {
        return Ok(eta.clone());
    }
    let proj = ZMap::from_fn(triangulate_cube(2)?, |x| Point(x.0[..n].to_vec()))?;
    compose(eta, &proj)
}

pub fn generalize(eta: &ZMap) -> Result<Generalized> {
    if !nonconstant_on_corners(eta) {
        return Err(Error::ConstantOnCorners);
    }
    let padded = pad(eta)?;
    let ell = lift(&padded)?.map;
    let (_, hi) = value_range(&ell);
    let z = hi.floor().to_integer() + 1;
    let (hat, alpha) = exists_upper_bound(&ell, &z)?;
    let (lo, hi) = value_range(&hat);
    let a = lo.floor().to_integer();
    let mut b = hi.ceil().to_integer();
    if a == b {
        b += 1;
    }
    let theta = compose(&zeta_segment(&a, &b)?, &hat)?;
    Ok(Generalized {
        theta,
        alpha,
        padded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::polyhedron::Polyhedron;
    use crate::zmap::equals;

    fn iota() -> ZMap {
        ZMap::from_fn(triangulate_cube(1).unwrap(), |x| Point(vec![x.0[0].clone(), int(0)])).unwrap()
    }

    fn wrap() -> ZMap {
        let four = ZMap::from_fn(triangulate_cube(1).unwrap(), |x| Point(vec![&x.0[0] * int(4)])).unwrap();
        compose(&zeta_segment(&BigInt::from(0), &BigInt::from(4)).unwrap(), &four).unwrap()
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(&int(0)), Point::from_ints(&[0, 0]));
        assert_eq!(zeta(&rat(3, 2)), Point::from_fracs(&[(1, 1), (1, 2)]));
        assert_eq!(zeta(&rat(-1, 2)), Point::from_fracs(&[(0, 1), (1, 2)]));
        assert_eq!(zeta(&rat(5, 2)), Point::from_fracs(&[(1, 2), (1, 1)]));
    }

    #[test]
    fn segments() {
        let s = zeta_segment(&BigInt::from(0), &BigInt::from(1)).unwrap();
        assert_eq!(s.evaluate(&Point(vec![rat(1, 3)])).unwrap(), Point(vec![rat(1, 3), int(0)]));
        let w = zeta_segment(&BigInt::from(0), &BigInt::from(4)).unwrap();
        for k in [1, 3, 5, 7] {
            let x = rat(k, 2);
            assert_eq!(w.evaluate(&Point(vec![x.clone()])).unwrap(), zeta(&x));
        }
        assert!(matches!(
            zeta_segment(&BigInt::from(2), &BigInt::from(2)),
            Err(Error::BadInterval(..))
        ));
    }

    #[test]
    fn lifts_and_degrees() {
        let l = lift(&iota()).unwrap();
        assert_eq!(l.base_value, int(0));
        assert_eq!(l.map.evaluate(&Point(vec![rat(1, 2)])).unwrap(), Point(vec![rat(1, 2)]));
        assert_eq!(degree(&iota()).unwrap(), int(1));

        let c = ZMap::constant(triangulate_cube(2).unwrap(), &Point::from_ints(&[0, 0])).unwrap();
        assert_eq!(degree(&c).unwrap(), int(0));
        assert_eq!(lift(&c).unwrap().base_value, int(0));

        let w = wrap();
        assert!(w.is_into(&Polyhedron::boundary_square()));
        assert_eq!(degree(&w).unwrap(), int(4));
        let lw = lift(&w).unwrap().map;
        assert_eq!(lw.evaluate(&Point(vec![rat(5, 8)])).unwrap(), Point(vec![rat(5, 2)]));

        let inside = ZMap::identity(triangulate_cube(2).unwrap());
        assert!(matches!(lift(&inside), Err(Error::NotIntoBoundary)));
    }

    #[test]
    fn corners() {
        assert!(nonconstant_on_corners(&iota()));
        assert!(!nonconstant_on_corners(&wrap()));
        let c = ZMap::constant(triangulate_cube(1).unwrap(), &Point::from_ints(&[1, 1])).unwrap();
        assert!(!nonconstant_on_corners(&c));
        assert!(matches!(generalize(&c), Err(Error::ConstantOnCorners)));
    }

    #[test]
    fn generalizing_iota() {
        let g = generalize(&iota()).unwrap();
        assert_eq!(g.theta.domain_dim(), 2);
        assert!(g.theta.is_into(&Polyhedron::boundary_square()));
        assert!(equals(&compose(&g.theta, &g.alpha).unwrap(), &g.padded).unwrap());
        assert!(degree(&g.theta).unwrap() >= int(2));
    }
}
