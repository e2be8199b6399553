//! Oracles written independently of the library, plus random generators.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use nullary_core::mv::Term;
use nullary_core::point::Point;
use nullary_core::triangulation::SimplicialComplex;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_unit<R: Rng>(rng: &mut R, max_den: i64) -> Q {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=d), d)
}

pub fn rand_cube_point<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> Point {
    Point((0..n).map(|_| rand_unit(rng, max_den)).collect())
}

/// `den(x)·(x, 1)`.
pub fn lift_row(p: &Point) -> Vec<BigInt> {
    let den = p.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut row: Vec<BigInt> = p.0.iter().map(|x| (x * Q::from(den.clone())).to_integer()).collect();
    row.push(den);
    row
}

/// Fraction-free elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = column_subsets(n - 1, k);
    for mut s in column_subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// The homogeneous lifts extend to a lattice basis: the maximal minors
/// have gcd one.
pub fn simplex_is_unimodular(points: &[Point]) -> bool {
    let rows: Vec<Vec<BigInt>> = points.iter().map(lift_row).collect();
    let k = rows.len();
    let n = rows[0].len();
    let mut g = BigInt::zero();
    for cols in column_subsets(n, k) {
        let m = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&det(m));
        if g.is_one() {
            return true;
        }
    }
    false
}

pub fn complex_is_unimodular(c: &SimplicialComplex) -> bool {
    (0..c.simplices().len()).all(|i| simplex_is_unimodular(&c.simplex_points(i)))
}

/// Counter-clockwise unit-speed wrap of the line around the square boundary.
pub fn zeta(x: &Q) -> Point {
    let k = x.floor();
    let f = x - &k;
    let side = k.to_integer().mod_floor(&BigInt::from(4));
    let (zero, one) = (Q::zero(), Q::one());
    let c = if side.is_zero() {
        [f, zero]
    } else if side == BigInt::from(1) {
        [one, f]
    } else if side == BigInt::from(2) {
        [one - f, Q::one()]
    } else {
        [zero, one - f]
    };
    Point(c.to_vec())
}

pub fn on_square_boundary(p: &Point) -> bool {
    let unit = |t: &Q| !t.is_negative() && *t <= Q::one();
    let edge = |t: &Q| t.is_zero() || t.is_one();
    p.0.len() == 2 && unit(&p.0[0]) && unit(&p.0[1]) && (edge(&p.0[0]) || edge(&p.0[1]))
}

/// Index of a closed side of the square containing all the points.
pub fn common_side(points: &[Point]) -> Option<usize> {
    let tests: [fn(&Point) -> bool; 4] = [
        |p| p.0[1].is_zero(),
        |p| p.0[0].is_one(),
        |p| p.0[1].is_one(),
        |p| p.0[0].is_zero(),
    ];
    (0..4).find(|&s| points.iter().all(|p| on_square_boundary(p) && tests[s](p)))
}

/// Łukasiewicz semantics, straight from the truth tables.
pub fn semantics(t: &Term, x: &[Q]) -> Q {
    let one = Q::one();
    match t {
        Term::Zero => Q::zero(),
        Term::One => one,
        Term::Var(i) => x[i - 1].clone(),
        Term::Neg(a) => one - semantics(a, x),
        Term::Oplus(a, b) => (semantics(a, x) + semantics(b, x)).min(one),
        Term::Odot(a, b) => (semantics(a, x) + semantics(b, x) - one).max(Q::zero()),
        Term::Join(a, b) => semantics(a, x).max(semantics(b, x)),
        Term::Meet(a, b) => semantics(a, x).min(semantics(b, x)),
    }
}

pub fn random_term<R: Rng>(rng: &mut R, depth: usize, m: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..6) {
            0 => Term::Zero,
            1 => Term::One,
            _ => Term::var(rng.gen_range(1..=m)),
        };
    }
    let a = random_term(rng, depth - 1, m);
    match rng.gen_range(0..5) {
        0 => Term::neg(a),
        k => {
            let b = random_term(rng, depth - 1, m);
            match k {
                1 => Term::oplus(a, b),
                2 => Term::odot(a, b),
                3 => Term::join(a, b),
                _ => Term::meet(a, b),
            }
        }
    }
}

/// Solves `a·x = b` over the rationals for square nonsingular `a`.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let k = &a[r][c] / &a[c][c];
                for j in c..n {
                    let t = &k * &a[c][j];
                    a[r][j] -= t;
                }
                let t = &k * &b[c];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Coefficients `(c, l₁..lₙ)` of the affine function through the given
/// vertex values.
pub fn affine_through(points: &[Point], values: &[Q]) -> Option<Vec<Q>> {
    let a = points
        .iter()
        .map(|p| std::iter::once(Q::one()).chain(p.0.iter().cloned()).collect())
        .collect();
    solve(a, values.to_vec())
}

/// A random point of the simplex with barycentric weights of bounded
/// denominator.
pub fn rand_in_simplex<R: Rng>(rng: &mut R, vertices: &[Point], max_den: i64) -> Point {
    let d = rng.gen_range(1..=max_den);
    let mut left = d;
    let mut w = Vec::new();
    for _ in 1..vertices.len() {
        let k = rng.gen_range(0..=left);
        w.push(k);
        left -= k;
    }
    w.push(left);
    let n = vertices[0].dim();
    Point(
        (0..n)
            .map(|i| {
                vertices
                    .iter()
                    .zip(&w)
                    .map(|(v, &k)| &v.0[i] * q(k, d))
                    .sum()
            })
            .collect(),
    )
}
