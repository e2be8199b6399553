//! Exact linear algebra over the rationals and the integers.
//!
//! Everything here works on small dense matrices (at most 5 columns in
//! practice), so the algorithms are the textbook ones: Gauss-Jordan over
//! `BigRational`, Bareiss determinants and extended-gcd column reduction
//! over `BigInt`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn to_rational(n: &BigInt) -> Rational {
    BigRational::from_integer(n.clone())
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub(crate) fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, d| acc.lcm(d))
}

pub(crate) fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, d| acc.gcd(d))
}

/// Scales a rational vector to a primitive integer vector (content 1),
/// preserving direction. The zero vector maps to the zero vector.
pub(crate) fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_all(v.iter().map(|x| x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * to_rational(&l)).to_integer()).collect();
    let g = gcd_all(ints.iter());
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn dot_int(a: &[BigInt], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * to_rational(x))
}

/// Reduced row echelon form, pivoting only in the first `ncols` columns
/// (further columns are carried along, e.g. an augmented right-hand side).
/// Zero rows are dropped; returns the pivot columns.
pub(crate) fn rref(m: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    // rows past the rank may still hold non-zero augmented entries
    let mut kept: Vec<Vec<Rational>> = Vec::with_capacity(m.len());
    for (i, r) in m.drain(..).enumerate() {
        if i < row || r.iter().any(|x| !x.is_zero()) {
            kept.push(r);
        }
    }
    *m = kept;
    pivots
}

pub(crate) fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Canonical basis of `{x : rows · x = 0}` read off the reduced row echelon
/// form: one vector per free column, with a 1 in that column.
pub(crate) fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r[..ncols].to_vec()).collect();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a · x = b` (free variables set to zero), or `None` if
/// the system is inconsistent.
pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    if m.len() > pivots.len() {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][ncols].clone();
    }
    Some(x)
}

/// Determinant by fraction-free Bareiss elimination.
pub(crate) fn det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// gcd of all maximal minors of a full-row-rank integer matrix. Zero when
/// the rows are linearly dependent.
pub(crate) fn maximal_minors_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let r = rows.len();
    let ncols = rows.first().map_or(0, |row| row.len());
    let mut g = BigInt::zero();
    for cols in (0..ncols).combinations(r) {
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&det_int(sub));
        if g.is_one() {
            break;
        }
    }
    g
}

fn column_combine(
    m: &mut [Vec<BigInt>],
    k: usize,
    j: usize,
    (s, t): (&BigInt, &BigInt),
    (q, p): (&BigInt, &BigInt),
) {
    for row in m.iter_mut() {
        let ck = row[k].clone();
        let cj = row[j].clone();
        row[k] = s * &ck + t * &cj;
        row[j] = p * &cj - q * &ck;
    }
}

/// Column-style Hermite reduction: returns `(h, u, rank)` with `a · u = h`,
/// `u` unimodular and `h` lower echelon with positive pivots. The columns of
/// `u` past `rank` form a basis of the integer kernel of `a`.
pub(crate) fn column_reduce(
    a: &[Vec<BigInt>],
    ncols: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut k = 0;
    for i in 0..h.len() {
        if k == ncols {
            break;
        }
        for j in k + 1..ncols {
            if h[i][j].is_zero() {
                continue;
            }
            let a_ik = h[i][k].clone();
            let a_ij = h[i][j].clone();
            let eg = a_ik.extended_gcd(&a_ij);
            let p = &a_ik / &eg.gcd;
            let q = &a_ij / &eg.gcd;
            column_combine(&mut h, k, j, (&eg.x, &eg.y), (&q, &p));
            column_combine(&mut u, k, j, (&eg.x, &eg.y), (&q, &p));
        }
        if !h[i][k].is_zero() {
            if h[i][k].is_negative() {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[k] = -row[k].clone();
                }
            }
            k += 1;
        }
    }
    (h, u, k)
}

/// An integer solution `x` of `w · x = b` for a full-row-rank `w`, or `None`
/// when only non-integral solutions exist.
pub(crate) fn integer_solve(w: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = w.len();
    let ncols = w.first().map_or(0, |row| row.len());
    let (h, u, rank) = column_reduce(w, ncols);
    if rank != r {
        return None;
    }
    let mut y: Vec<BigInt> = Vec::with_capacity(r);
    for i in 0..r {
        let mut acc = b[i].clone();
        for (j, yj) in y.iter().enumerate() {
            acc -= &h[i][j] * yj;
        }
        let (quot, rem) = acc.div_rem(&h[i][i]);
        if !rem.is_zero() {
            return None;
        }
        y.push(quot);
    }
    Some(
        (0..ncols)
            .map(|row| {
                y.iter()
                    .enumerate()
                    .fold(BigInt::zero(), |acc, (j, yj)| acc + &u[row][j] * yj)
            })
            .collect(),
    )
}

/// Basis of the lattice `{x ∈ ℤ^ncols : c · x = 0}`.
pub(crate) fn integer_kernel(c: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (_, u, rank) = column_reduce(c, ncols);
    (rank..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j].clone()).collect())
        .collect()
}

/// Smallest prime strictly greater than `bound`.
pub(crate) fn next_prime_above(bound: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if bound < &two {
        return two;
    }
    let mut p: BigInt = bound + 1;
    if p.is_even() && p != two {
        p += 1;
    }
    while !is_probable_prime(&p) {
        p += 2;
    }
    p
}

/// Miller-Rabin with the first twelve prime bases; deterministic for every
/// input below 3.3e24, far beyond anything the constructions produce.
pub(crate) fn is_probable_prime(n: &BigInt) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let one = BigInt::one();
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for &b in &BASES {
        let b = BigInt::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_hand_determinants() {
        assert_eq!(det_int(ints(&[&[0, 1], &[2, 3]])), BigInt::from(-2));
        assert_eq!(
            det_int(ints(&[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1]])),
            BigInt::from(1)
        );
        assert_eq!(
            det_int(ints(&[&[2, 0, 0], &[0, 3, 0], &[1, 1, 0]])),
            BigInt::zero()
        );
    }

    #[test]
    fn minors_gcd_detects_unimodular_rows() {
        assert_eq!(maximal_minors_gcd(&ints(&[&[1, 2]])), BigInt::one());
        assert_eq!(
            maximal_minors_gcd(&ints(&[&[1, 3], &[1, 1]])),
            BigInt::from(2)
        );
        assert_eq!(
            maximal_minors_gcd(&ints(&[&[0, 0, 1], &[2, 0, 1]])),
            BigInt::from(2)
        );
    }

    #[test]
    fn column_reduce_gives_kernel_and_solutions() {
        let a = ints(&[&[2, 4, 6]]);
        let ker = integer_kernel(&a, 3);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let s: BigInt = k.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        let w = ints(&[&[1, 2, 6], &[0, 1, 1]]);
        let b = vec![BigInt::from(5), BigInt::from(-3)];
        let x = integer_solve(&w, &b).unwrap();
        for (row, bi) in w.iter().zip(&b) {
            let s: BigInt = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!(&s, bi);
        }
        // (2) x = 1 has no integer solution
        assert!(integer_solve(&ints(&[&[2]]), &[BigInt::one()]).is_none());
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime_above(&BigInt::from(1)), BigInt::from(2));
        assert_eq!(next_prime_above(&BigInt::from(10)), BigInt::from(11));
        assert_eq!(next_prime_above(&BigInt::from(13)), BigInt::from(17));
        assert!(is_probable_prime(&BigInt::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigInt::from(561)));
    }

    #[test]
    fn nullspace_is_canonical() {
        let rows = vec![vec![int(1), int(1)]];
        assert_eq!(nullspace(&rows, 2), vec![vec![int(-1), int(1)]]);
        let rows = vec![vec![int(1), int(0)]];
        assert_eq!(nullspace(&rows, 2), vec![vec![int(0), int(1)]]);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "1/2", "-7/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("2/6"), Some(rat(1, 3)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
