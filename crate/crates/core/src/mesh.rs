//! Mutable simplicial mesh used internally by every construction.
//!
//! A mesh stores its maximal cells only, together with a per-vertex payload
//! (a rational vector, interpolated linearly whenever a cell is subdivided).
//! All refinement is done by stellar subdivision, so the payload always
//! describes the same piecewise-linear function.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Range;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel, nullspace, primitive, rank, solve, to_rational, Rational};
use crate::point::{Point, Vector};
use crate::polytope::{boxes_overlap, HalfSpace, Polytope};
use crate::simplex::{barycentric, is_regular_vertices};
use crate::triangulation::SimplicialComplex;

pub const DEFAULT_BLOWUP_CAP: usize = 10_000;

/// Where a carving target lives: among the mesh points, or among a slice of
/// the payload coordinates.
#[derive(Clone, Debug)]
pub(crate) enum Space {
    Domain,
    Payload(Range<usize>),
}

#[derive(Clone, Debug)]
pub(crate) struct Mesh {
    n: usize,
    pub(crate) points: Vec<Point>,
    pub(crate) payload: Vec<Vector>,
    index: HashMap<Point, usize>,
    cells: Vec<Option<Vec<usize>>>,
    incident: Vec<BTreeSet<usize>>,
}

impl Mesh {
    pub fn new(n: usize) -> Self {
        Mesh {
            n,
            points: Vec::new(),
            payload: Vec::new(),
            index: HashMap::new(),
            cells: Vec::new(),
            incident: Vec::new(),
        }
    }

    pub fn from_complex(c: &SimplicialComplex, payload: Vec<Vector>) -> Self {
        let mut m = Mesh::new(c.ambient_dim());
        for (p, w) in c.vertices().iter().zip(payload) {
            m.add_vertex(p.clone(), w);
        }
        for s in c.simplices() {
            m.add_cell(s.clone());
        }
        m
    }

    /// Kuhn triangulation of the integer box `[lo, hi]`, one cube at a time.
    pub fn integer_box(lo: &[BigInt], hi: &[BigInt]) -> Self {
        let n = lo.len();
        let mut m = Mesh::new(n);
        let ranges: Vec<Vec<BigInt>> = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| {
                let mut v = Vec::new();
                let mut x = a.clone();
                while &x < b {
                    v.push(x.clone());
                    x += 1;
                }
                v
            })
            .collect();
        for corner in ranges.iter().multi_cartesian_product() {
            for perm in (0..n).permutations(n) {
                let mut cur: Vec<BigInt> = corner.iter().map(|c| (*c).clone()).collect();
                let mut ids = vec![m.add_point(&cur)];
                for &axis in &perm {
                    cur[axis] += 1;
                    ids.push(m.add_point(&cur));
                }
                ids.sort();
                m.add_cell(ids);
            }
        }
        m
    }

    fn add_point(&mut self, c: &[BigInt]) -> usize {
        let p = Point(c.iter().map(to_rational).collect());
        self.add_vertex(p, Vec::new())
    }

    pub fn vertex_id(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn add_vertex(&mut self, p: Point, payload: Vector) -> usize {
        if let Some(&id) = self.index.get(&p) {
            return id;
        }
        debug_assert_eq!(p.dim(), self.n);
        let id = self.points.len();
        self.index.insert(p.clone(), id);
        self.points.push(p);
        self.payload.push(payload);
        self.incident.push(BTreeSet::new());
        id
    }

    pub fn add_cell(&mut self, ids: Vec<usize>) -> usize {
        let cid = self.cells.len();
        for &v in &ids {
            self.incident[v].insert(cid);
        }
        self.cells.push(Some(ids));
        cid
    }

    fn remove_cell(&mut self, cid: usize) -> Vec<usize> {
        let ids = self.cells[cid].take().expect("cell is live");
        for &v in &ids {
            self.incident[v].remove(&cid);
        }
        ids
    }

    pub fn cell(&self, cid: usize) -> Option<&[usize]> {
        self.cells[cid].as_deref()
    }

    pub fn live_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].is_some()).collect()
    }

    pub fn cell_points(&self, cid: usize) -> Vec<Point> {
        self.cells[cid]
            .as_ref()
            .expect("cell is live")
            .iter()
            .map(|&v| self.points[v].clone())
            .collect()
    }

    /// Live cells having every vertex of `face`.
    pub fn cells_containing(&self, face: &[usize]) -> Vec<usize> {
        let Some((first, rest)) = face.split_first() else {
            return Vec::new();
        };
        self.incident[*first]
            .iter()
            .copied()
            .filter(|c| rest.iter().all(|v| self.incident[*v].contains(c)))
            .collect()
    }

    fn coords<'a>(&'a self, v: usize, space: &Space) -> &'a [Rational] {
        match space {
            Space::Domain => &self.points[v].0,
            Space::Payload(r) => &self.payload[v][r.clone()],
        }
    }

    fn cell_bbox(&self, cid: usize, space: &Space) -> (Vector, Vector) {
        let ids = self.cells[cid].as_ref().expect("cell is live");
        let mut lo = self.coords(ids[0], space).to_vec();
        let mut hi = lo.clone();
        for &v in &ids[1..] {
            for (i, c) in self.coords(v, space).iter().enumerate() {
                if c < &lo[i] {
                    lo[i] = c.clone();
                }
                if c > &hi[i] {
                    hi[i] = c.clone();
                }
            }
        }
        (lo, hi)
    }

    /// Stellar subdivision of `face` at `p = Σ weights[i]·face[i]`.
    /// Returns the new vertex and the new cells.
    pub fn star(&mut self, face: &[usize], p: Point, weights: &[Rational]) -> (usize, Vec<usize>) {
        debug_assert!(face.len() >= 2);
        let width = self.payload[face[0]].len();
        let mut pay = vec![Rational::zero(); width];
        for (&v, w) in face.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (a, b) in pay.iter_mut().zip(&self.payload[v]) {
                *a += w * b;
            }
        }
        debug_assert!(!self.index.contains_key(&p));
        let pid = self.add_vertex(p, pay);
        let mut created = Vec::new();
        for cid in self.cells_containing(face) {
            let ids = self.remove_cell(cid);
            for u in face {
                let mut next: Vec<usize> = ids.iter().copied().filter(|x| x != u).collect();
                next.push(pid);
                next.sort();
                created.push(self.add_cell(next));
            }
        }
        (pid, created)
    }

    /// First live cell containing `x`, with barycentric coordinates.
    pub fn locate(&self, x: &Point) -> Option<(usize, Vec<Rational>)> {
        for cid in self.live_cells() {
            let (lo, hi) = self.cell_bbox(cid, &Space::Domain);
            if !boxes_overlap(&(lo, hi), &(x.0.clone(), x.0.clone())) {
                continue;
            }
            let pts = self.cell_points(cid);
            if let Some(l) = barycentric(&pts, x) {
                if l.iter().all(|c| !c.is_negative()) {
                    return Some((cid, l));
                }
            }
        }
        None
    }

    /// Makes `x` a vertex by starring the smallest face containing it.
    pub fn insert_point(&mut self, x: &Point) -> Result<usize> {
        if let Some(id) = self.vertex_id(x) {
            return Ok(id);
        }
        let (cid, l) = self
            .locate(x)
            .ok_or_else(|| Error::PointOutside(x.to_string()))?;
        let ids = self.cells[cid].clone().expect("located cell is live");
        let (face, weights): (Vec<usize>, Vec<Rational>) = ids
            .iter()
            .zip(l)
            .filter(|(_, w)| w.is_positive())
            .map(|(v, w)| (*v, w))
            .unzip();
        Ok(self.star(&face, x.clone(), &weights).0)
    }

    /// Splits every edge along which the affine function `g` changes sign.
    /// `g` receives the point and payload of a vertex.
    pub fn cut(&mut self, g: impl Fn(&Point, &[Rational]) -> Rational) {
        let mut vals: Vec<Rational> = (0..self.points.len())
            .map(|v| g(&self.points[v], &self.payload[v]))
            .collect();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for cid in self.live_cells() {
            let ids = self.cells[cid].as_ref().expect("live");
            for (&a, &b) in ids.iter().tuple_combinations() {
                if (&vals[a] * &vals[b]).is_negative() {
                    edges.insert((a, b));
                }
            }
        }
        for (a, b) in edges {
            if self.cells_containing(&[a, b]).is_empty() {
                continue;
            }
            let t = &vals[a] / (&vals[a] - &vals[b]);
            let s = Rational::one() - &t;
            let p = Point::combine([(&self.points[a], &s), (&self.points[b], &t)]);
            self.star(&[a, b], p, &[s, t]);
            vals.push(Rational::zero());
        }
    }

    /// Refines a regular mesh by Farey blow-ups of the edges that cross
    /// the zero set of `g` (affine on each cell with integer coefficients)
    /// until no edge crosses it. Cells stay regular throughout.
    pub fn farey_cut(&mut self, g: impl Fn(&Point, &[Rational]) -> Rational, cap: usize) -> Result<()> {
        let mut vals: Vec<Rational> = (0..self.points.len())
            .map(|v| g(&self.points[v], &self.payload[v]))
            .collect();
        let mut blown = 0;
        loop {
            let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
            for cid in self.live_cells() {
                let ids = self.cells[cid].as_ref().expect("live");
                for (&a, &b) in ids.iter().tuple_combinations() {
                    if (&vals[a] * &vals[b]).is_negative() {
                        edges.insert((a, b));
                    }
                }
            }
            if edges.is_empty() {
                return Ok(());
            }
            for (a, b) in edges {
                if self.cells_containing(&[a, b]).is_empty() {
                    continue;
                }
                if blown == cap {
                    return Err(Error::BlowupLimit(cap));
                }
                blown += 1;
                let da = to_rational(&self.points[a].denominator());
                let db = to_rational(&self.points[b].denominator());
                let sum = &da + &db;
                let w = [da / &sum, db / sum];
                let p = Point::combine([(&self.points[a], &w[0]), (&self.points[b], &w[1])]);
                let (pid, _) = self.star(&[a, b], p, &w);
                vals.push(g(&self.points[pid], &self.payload[pid]));
            }
        }
    }

    /// Refines the mesh until the target polytope meets every cell in a
    /// face of that cell (possibly empty). Cells far from the target are
    /// left alone.
    pub fn carve(&mut self, r: &Polytope, space: &Space) {
        if let Space::Domain = space {
            if self.is_face(r.vertices()) {
                return;
            }
        }
        let hs = r.halfspaces();
        let constraints: Vec<(&HalfSpace, bool)> = hs
            .inequalities
            .iter()
            .map(|h| (h, false))
            .chain(hs.equalities.iter().map(|h| (h, true)))
            .collect();
        if constraints.is_empty() {
            return;
        }
        let rbox = r.bbox();
        let mut memo: Vec<Option<Vector>> = Vec::new();
        let eval = |mesh: &Mesh, memo: &mut Vec<Option<Vector>>, v: usize| -> Vector {
            if memo.len() <= v {
                memo.resize(mesh.points.len(), None);
            }
            memo[v]
                .get_or_insert_with(|| {
                    let x = mesh.coords(v, space);
                    constraints.iter().map(|(h, _)| h.eval(x)).collect()
                })
                .clone()
        };
        let near: Vec<usize> = self
            .live_cells()
            .into_iter()
            .filter(|&c| boxes_overlap(&self.cell_bbox(c, space), &rbox))
            .collect();
        let mut region: BTreeSet<usize> = near.into_iter().collect();
        for hi in 0..constraints.len() {
            let mut work = region.clone();
            while let Some(cid) = work.pop_first() {
                let Some(ids) = self.cells[cid].clone() else {
                    continue;
                };
                let g: Vec<Vector> = ids.iter().map(|&v| eval(self, &mut memo, v)).collect();
                let crossing = ids
                    .iter()
                    .enumerate()
                    .tuple_combinations()
                    .find(|((i, _), (j, _))| (&g[*i][hi] * &g[*j][hi]).is_negative());
                let Some(((i, &a), (j, &b))) = crossing else {
                    continue;
                };
                if meets_in_face(&g, &constraints) {
                    continue;
                }
                let ga = &g[i][hi];
                let gb = &g[j][hi];
                let t = ga / (ga - gb);
                let s = Rational::one() - &t;
                let p = Point::combine([(&self.points[a], &s), (&self.points[b], &t)]);
                let (_, created) = self.star(&[a, b], p, &[s, t]);
                for c in created {
                    work.insert(c);
                    region.insert(c);
                }
            }
        }
    }

    /// True when the points are mesh vertices spanning a face of some cell.
    fn is_face(&self, pts: &[Point]) -> bool {
        let ids: Option<Vec<usize>> = pts.iter().map(|p| self.vertex_id(p)).collect();
        ids.is_some_and(|ids| !self.cells_containing(&ids).is_empty())
    }

    /// Replaces the cells by the maximal faces lying in the union of the
    /// given polytopes. Assumes the mesh was carved against each of them.
    pub fn restrict_to(&mut self, parts: &[Polytope]) {
        let mut inside: HashMap<usize, Vec<bool>> = HashMap::new();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cid in self.live_cells() {
            let ids = self.cells[cid].clone().expect("live");
            for &v in &ids {
                inside
                    .entry(v)
                    .or_insert_with(|| parts.iter().map(|r| r.contains(&self.points[v])).collect());
            }
            for k in 0..parts.len() {
                let f: Vec<usize> = ids.iter().copied().filter(|v| inside[v][k]).collect();
                if !f.is_empty() {
                    faces.insert(f);
                }
            }
        }
        self.replace_cells(maximal_sets(faces));
    }

    /// Replaces the cells `old` by `new`, which must cover the same region.
    pub fn swap_cells(&mut self, old: &[usize], new: Vec<Vec<usize>>) -> Vec<usize> {
        for &cid in old {
            self.remove_cell(cid);
        }
        new.into_iter()
            .map(|mut c| {
                c.sort();
                self.add_cell(c)
            })
            .collect()
    }

    /// Replaces all cells; the new cells must form a complex.
    pub fn replace_cells(&mut self, cells: Vec<Vec<usize>>) {
        for cid in self.live_cells() {
            self.remove_cell(cid);
        }
        for c in cells {
            self.add_cell(c);
        }
    }

    /// Repeatedly stars the lexicographically first minimal non-regular
    /// face until every cell is regular.
    pub fn regularize(&mut self, cap: usize) -> Result<()> {
        let mut cache: HashMap<Vec<usize>, bool> = HashMap::new();
        let mut queue: BTreeMap<(usize, Vec<Point>), Vec<usize>> = BTreeMap::new();
        for cid in self.live_cells() {
            self.scan_cell(cid, &mut cache, &mut queue);
        }
        let mut blowups = 0;
        while let Some((_, face)) = queue.pop_first() {
            if self.cells_containing(&face).is_empty() {
                continue;
            }
            if blowups == cap {
                return Err(Error::BlowupLimit(cap));
            }
            blowups += 1;
            let (support, p, weights) = self.blow_point(&face);
            let (_, created) = self.star(&support, p, &weights);
            for cid in created {
                self.scan_cell(cid, &mut cache, &mut queue);
            }
        }
        Ok(())
    }

    fn scan_cell(
        &self,
        cid: usize,
        cache: &mut HashMap<Vec<usize>, bool>,
        queue: &mut BTreeMap<(usize, Vec<Point>), Vec<usize>>,
    ) {
        let ids = self.cells[cid].as_ref().expect("live");
        let mut regular = |face: &Vec<usize>| -> bool {
            if face.len() < 2 {
                return true;
            }
            *cache.entry(face.clone()).or_insert_with(|| {
                let pts: Vec<Point> = face.iter().map(|&v| self.points[v].clone()).collect();
                is_regular_vertices(&pts)
            })
        };
        if regular(ids) {
            return;
        }
        for size in 2..=ids.len() {
            for face in ids.iter().copied().combinations(size) {
                if regular(&face) {
                    continue;
                }
                let minimal = face
                    .iter()
                    .map(|skip| face.iter().copied().filter(|v| v != skip).collect::<Vec<_>>())
                    .all(|f| regular(&f));
                if minimal {
                    let mut key: Vec<Point> = face.iter().map(|&v| self.points[v].clone()).collect();
                    key.sort();
                    queue.insert((size, key), face);
                }
            }
        }
    }

    /// Subdivision point for a minimal non-regular face: its parallelepiped
    /// point of least denominator. Every starred cell has strictly smaller
    /// multiplicity.
    fn blow_point(&self, face: &[usize]) -> (Vec<usize>, Point, Vec<Rational>) {
        let w: Vec<Vec<BigInt>> = face.iter().map(|&v| self.points[v].homogeneous().0).collect();
        let width = w[0].len();
        let (u, coeffs) = parallelepiped_point(&w);
        let last = to_rational(u.last().expect("nonempty"));
        let p = Point(u[..width - 1].iter().map(|x| to_rational(x) / &last).collect());
        let mut support = Vec::new();
        let mut weights = Vec::new();
        for ((&v, c), row) in face.iter().zip(&coeffs).zip(&w) {
            if c.is_positive() {
                support.push(v);
                weights.push(c * to_rational(row.last().expect("nonempty")) / &last);
            }
        }
        (support, p, weights)
    }

    /// Canonical complex (sorted vertices and cells) with matching payload.
    pub fn to_complex(&self) -> (SimplicialComplex, Vec<Vector>) {
        let live = self.live_cells();
        let used: BTreeSet<usize> = live
            .iter()
            .flat_map(|&c| self.cells[c].as_ref().expect("live").iter().copied())
            .collect();
        let mut order: Vec<usize> = used.into_iter().collect();
        order.sort_by(|a, b| self.points[*a].cmp(&self.points[*b]));
        let mut remap = vec![usize::MAX; self.points.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut cells: Vec<Vec<usize>> = live
            .iter()
            .map(|&c| {
                let mut s: Vec<usize> = self.cells[c]
                    .as_ref()
                    .expect("live")
                    .iter()
                    .map(|&v| remap[v])
                    .collect();
                s.sort();
                s
            })
            .collect();
        cells.sort();
        let vertices = order.iter().map(|&v| self.points[v].clone()).collect();
        let payload = order.iter().map(|&v| self.payload[v].clone()).collect();
        (SimplicialComplex::from_parts_unchecked(vertices, cells), payload)
    }
}

/// The lattice point of the open fundamental parallelepiped of `w` (within
/// the saturation of its span) with the smallest last coordinate, found by
/// enumerating the finite group generated by the saturation basis.
fn parallelepiped_point(w: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Rational>) {
    let width = w[0].len();
    let wq: Vec<Vector> = w.iter().map(|r| r.iter().map(to_rational).collect()).collect();
    let orth: Vec<Vec<BigInt>> = nullspace(&wq, width).iter().map(|v| primitive(v)).collect();
    let basis: Vec<Vec<BigInt>> = if orth.is_empty() {
        (0..width)
            .map(|i| (0..width).map(|j| BigInt::from((i == j) as u8)).collect())
            .collect()
    } else {
        integer_kernel(&orth, width)
    };
    let transpose: Vec<Vector> = (0..width)
        .map(|j| wq.iter().map(|r| r[j].clone()).collect())
        .collect();
    let frac = |c: Vec<Rational>| -> Vec<Rational> { c.into_iter().map(|x| &x - x.floor()).collect() };
    let generators: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| {
            let bq: Vector = b.iter().map(to_rational).collect();
            frac(solve(&transpose, &bq).expect("basis vector lies in the rational span"))
        })
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .collect();
    let zero = vec![Rational::zero(); w.len()];
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    let mut best: Option<(Vec<BigInt>, Vec<Rational>)> = None;
    while let Some(x) = frontier.pop() {
        for g in &generators {
            let y = frac(x.iter().zip(g).map(|(a, b)| a + b).collect());
            if !seen.insert(y.clone()) {
                continue;
            }
            let u: Vec<BigInt> = (0..width)
                .map(|j| {
                    y.iter()
                        .zip(w)
                        .fold(Rational::zero(), |acc, (f, r)| acc + f * to_rational(&r[j]))
                        .to_integer()
                })
                .collect();
            let better = match &best {
                None => true,
                Some((bu, _)) => (u.last(), &u) < (bu.last(), bu),
            };
            if better {
                best = Some((u, y.clone()));
            }
            frontier.push(y);
        }
    }
    best.expect("non-regular rows have a nonzero parallelepiped point")
}

/// Whether `{λ ∈ Δ : constraints}` is a face of the standard simplex.
/// `g[v][i]` is constraint `i` evaluated at vertex `v`.
pub(crate) fn meets_in_face(g: &[Vector], constraints: &[(&HalfSpace, bool)]) -> bool {
    let k1 = g.len();
    let m = constraints.len();
    let strictly_crosses = (0..m).any(|i| {
        g.iter().any(|row| row[i].is_positive()) && g.iter().any(|row| row[i].is_negative())
    });
    if !strictly_crosses {
        return true;
    }
    let unit = |j: usize| -> Vector {
        (0..k1)
            .map(|i| if i == j { Rational::one() } else { Rational::zero() })
            .collect()
    };
    let value = |i: usize, lam: &Vector| -> Rational {
        lam.iter()
            .zip(g)
            .fold(Rational::zero(), |acc, (l, row)| acc + l * &row[i])
    };
    let mut verts: Vec<Vector> = (0..k1).map(unit).collect();
    for i in 0..m {
        let is_eq = constraints[i].1;
        let vals: Vec<Rational> = verts.iter().map(|l| value(i, l)).collect();
        let mut next: Vec<Vector> = Vec::new();
        for (l, v) in verts.iter().zip(&vals) {
            if v.is_zero() || (!is_eq && v.is_positive()) {
                next.push(l.clone());
            }
        }
        for (a, b) in (0..verts.len()).tuple_combinations() {
            let (va, vb) = (&vals[a], &vals[b]);
            if (va * vb).is_negative() {
                let d = va - vb;
                let p: Vector = verts[a]
                    .iter()
                    .zip(&verts[b])
                    .map(|(x, y)| (va * y - vb * x) / &d)
                    .collect();
                next.push(p);
            }
        }
        next.sort();
        next.dedup();
        next.retain(|l| {
            let mut rows: Vec<Vector> = vec![vec![Rational::one(); k1]];
            for (j, x) in l.iter().enumerate() {
                if x.is_zero() {
                    rows.push(unit(j));
                }
            }
            for i2 in 0..=i {
                if value(i2, l).is_zero() {
                    rows.push(g.iter().map(|row| row[i2].clone()).collect());
                }
            }
            rank(&rows, k1) == k1
        });
        if next.is_empty() {
            return true;
        }
        verts = next;
    }
    verts
        .iter()
        .all(|l| l.iter().filter(|x| !x.is_zero()).count() == 1)
}

fn maximal_sets(sets: BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut by_size: Vec<Vec<usize>> = sets.into_iter().collect();
    by_size.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in by_size {
        let covered = kept
            .iter()
            .any(|k| s.iter().all(|v| k.binary_search(v).is_ok()));
        if !covered {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Bounding integer box of a point set, padded so every side has length
/// at least one.
pub(crate) fn integer_hull_box(points: &[&Point]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = points[0].dim();
    let mut lo: Vec<BigInt> = Vec::with_capacity(n);
    let mut hi: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let mn = points.iter().map(|p| p.0[i].floor().to_integer()).min().expect("nonempty");
        let mut mx = points.iter().map(|p| p.0[i].ceil().to_integer()).max().expect("nonempty");
        if mx == mn {
            mx += 1;
        }
        lo.push(mn);
        hi.push(mx);
    }
    (lo, hi)
}
