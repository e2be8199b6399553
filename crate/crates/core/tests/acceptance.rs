//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime; the test fails if any criterion fails or overruns its budget.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nullary_core::chain::{ascending_chain, boundary_problem, iota_prime, verify_chain, ChainRecord, BOUNDARY_PROBLEM};
use nullary_core::cover::{degree, lift, nonconstant_on_corners, zeta_segment};
use nullary_core::json::write_chain;
use nullary_core::mv::{mcnaughton, solution_polyhedron, UnificationProblem};
use nullary_core::point::Point;
use nullary_core::polyhedron::Polyhedron;
use nullary_core::simplex::Simplex;
use nullary_core::squeeze::{equal_denominator_points, make_space_witnessed, squeeze_witnessed, SqueezeContext};
use nullary_core::triangulation::{
    insert_vertex, joint_refinement, triangulate_cube, RegularTriangulation, SimplicialComplex,
};
use nullary_core::zmap::{compose, equals, extend_vertex_map, AffinePiece, ZMap};

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Triangulations gathered from every pipeline, rechecked in criterion 3.
#[derive(Default)]
struct Emitted(Vec<(&'static str, SimplicialComplex)>);

impl Emitted {
    fn add(&mut self, what: &'static str, c: &SimplicialComplex) {
        self.0.push((what, c.clone()));
    }
}

fn dualization() -> Outcome {
    let p = UnificationProblem::parse(BOUNDARY_PROBLEM, 2).map_err(fail)?;
    let sol = solution_polyhedron(&p).map_err(fail)?;
    // ⊆: every part is a segment on one side of the square
    for part in sol.parts() {
        ensure(common_side(part.vertices()).is_some(), format!("part {:?} leaves the boundary", part.vertices()))?;
    }
    // ⊇: the parts on each side cover it
    for side in 0..4 {
        let along = |p: &Point| -> Q {
            match side {
                0 | 2 => p.0[0].clone(),
                _ => p.0[1].clone(),
            }
        };
        let mut spans: Vec<(Q, Q)> = sol
            .parts()
            .iter()
            .filter(|part| common_side(part.vertices()) == Some(side) && part.dim() == 1)
            .map(|part| {
                let ts: Vec<Q> = part.vertices().iter().map(along).collect();
                (ts.iter().min().unwrap().clone(), ts.iter().max().unwrap().clone())
            })
            .collect();
        spans.sort();
        let mut reach = Q::zero();
        for (a, b) in spans {
            if a <= reach && b > reach {
                reach = b;
            }
        }
        ensure(reach.is_one(), format!("side {side} covered only up to {reach}"))?;
    }
    let square = Polyhedron::boundary_square();
    ensure(sol.is_subset_of(&square) && square.is_subset_of(&sol), "library double inclusion disagrees")?;
    Ok(format!("{} parts", sol.parts().len()))
}

fn check_chain(records: &[ChainRecord]) -> Result<(), String> {
    ensure(records.len() == 6, format!("{} records", records.len()))?;
    let report = verify_chain(records, &boundary_problem());
    ensure(report.all_pass(), format!("verdicts {:?}", report.verdicts))?;
    ensure(records[0].degree.is_one(), "degree of the base is not 1")?;
    ensure(records.windows(2).all(|w| w[0].degree < w[1].degree), "degrees do not increase")?;
    for (i, r) in records.iter().enumerate() {
        let s = &r.sigma;
        for c in s.domain().simplices() {
            let vals: Vec<Point> = c.iter().map(|&v| s.values()[v].clone()).collect();
            ensure(common_side(&vals).is_some(), format!("sigma {i} leaves the boundary"))?;
        }
        ensure(nonconstant_on_corners(s), format!("sigma {i} constant on corners"))?;
        if let Some(a) = &r.alpha {
            let back = compose(s, a).map_err(fail)?;
            ensure(equals(&back, &records[i - 1].sigma).map_err(fail)?, format!("composition {i}"))?;
        }
    }
    Ok(())
}

fn chain_certificate(out: &mut Option<Vec<ChainRecord>>) -> Outcome {
    let records = ascending_chain(5, 2).map_err(fail)?;
    check_chain(&records)?;
    let degrees: Vec<String> = records.iter().map(|r| r.degree.to_string()).collect();
    *out = Some(records);
    Ok(format!("degrees {}", degrees.join(" < ")))
}

fn random_regular_square<R: Rng>(rng: &mut R) -> RegularTriangulation {
    let mut t = triangulate_cube(2).unwrap();
    for _ in 0..rng.gen_range(0..4) {
        let p = Point(vec![
            q(rng.gen_range(1..7), 7),
            q(rng.gen_range(1..5), 5),
        ]);
        if t.vertex_index(&p).is_none() {
            t = insert_vertex(&t, &p).unwrap();
        }
    }
    t
}

fn unique_extension(emitted: &mut Emitted) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pieces = 0;
    for case in 0..100 {
        let t = random_regular_square(&mut rng);
        emitted.add("insert_vertex", t.complex());
        let m = rng.gen_range(1..=2);
        let values: Vec<Point> = t
            .vertices()
            .iter()
            .map(|p| {
                let d = p.denominator();
                Point((0..m).map(|_| Q::new(BigInt::from(rng.gen_range(0..=3)) * &d - BigInt::from(rng.gen_range(0..5)), d.clone())).collect())
            })
            .collect();
        let f = extend_vertex_map(t.clone(), values.clone()).map_err(|e| format!("case {case}: {e}"))?;
        for (i, s) in t.simplices().iter().enumerate() {
            let pts = t.simplex_points(i);
            for j in 0..m {
                let vals: Vec<Q> = s.iter().map(|&v| values[v].0[j].clone()).collect();
                let coef = affine_through(&pts, &vals).ok_or("singular simplex")?;
                ensure(coef.iter().all(|c| c.is_integer()), format!("case {case}: non-integer piece"))?;
            }
            pieces += 1;
        }
        for (p, v) in t.vertices().iter().zip(&values) {
            ensure(&f.evaluate(p).map_err(fail)? == v, format!("case {case}: vertex value changed"))?;
        }
        let again = extend_vertex_map(f.domain().clone(), f.values().to_vec()).map_err(fail)?;
        ensure(again == f && equals(&again, &f).map_err(fail)?, format!("case {case}: re-extension differs"))?;
    }
    Ok(format!("100 cases, {pieces} affine pieces"))
}

fn den(p: &Point) -> BigInt {
    p.denominator()
}

fn equal_denominators() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rq = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(1..=20);
        q(rng.gen_range(-2 * d..=2 * d), d)
    };
    for case in 0..1000 {
        let n = rng.gen_range(1..=3);
        let t = Point((0..n).map(|_| rq(&mut rng)).collect());
        let v: Vec<Q> = loop {
            let v: Vec<Q> = (0..n).map(|_| rq(&mut rng)).collect();
            if v.iter().any(|x| !x.is_zero()) {
                break v;
            }
        };
        let w: Vec<Q> = (0..n).map(|_| rq(&mut rng)).collect();
        let eps = q(rng.gen_range(1..=20), rng.gen_range(1..=20));
        let (d, tau) = equal_denominator_points(&t, &v, &w, &eps).map_err(|e| format!("case {case}: {e}"))?;
        ensure(d.is_positive() && d < eps && tau.is_positive() && tau < eps, format!("case {case}: step out of range"))?;
        let a = t.translate(&v.iter().map(|x| x * &d).collect::<Vec<_>>());
        let b = a.translate(&w.iter().map(|x| x * &tau).collect::<Vec<_>>());
        ensure(den(&a) == den(&b), format!("case {case}: denominators {} and {}", den(&a), den(&b)))?;
    }
    Ok("1000 instances".into())
}

/// A lattice simplex `b + A·Δ` with `A` a random unimodular matrix.
fn random_unimodular_simplex<R: Rng>(rng: &mut R, n: usize) -> Simplex {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let k = rng.gen_range(-1..=1);
            for c in 0..n {
                a[i][c] += k * a[j][c];
            }
        }
    }
    let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    let mut vs = vec![Point::from_ints(&b)];
    for j in 0..n {
        vs.push(Point::from_ints(&(0..n).map(|i| b[i] + a[i][j]).collect::<Vec<_>>()));
    }
    Simplex::new(vs).unwrap()
}

fn squeezing(emitted: &mut Emitted) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = BTreeMap::new();
    let mut case = 0;
    while done.values().sum::<usize>() < 24 {
        let n = if case % 2 == 0 { 2 } else { 3 };
        case += 1;
        let s = random_unimodular_simplex(&mut rng, n);
        let drop = rng.gen_range(0..=n);
        let fverts: Vec<Point> = s.vertices().iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, p)| p.clone()).collect();
        let f = Simplex::new(fverts.clone()).unwrap();
        let coef: Vec<BigInt> = (0..=n).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        let piece = AffinePiece::new(s.clone(), vec![coef]);
        let vals: Vec<Point> = fverts.iter().map(|p| piece.eval(p)).collect();
        if vals.iter().all(|v| *v == vals[0]) {
            continue;
        }
        let ctx = SqueezeContext::new(s.clone(), f.clone(), piece.clone()).map_err(fail)?;
        let out = squeeze_witnessed(&ctx).map_err(|e| format!("context {case}: {e}"))?;
        emitted.add("squeeze", out.rho.domain());
        let whole = RegularTriangulation::certify(SimplicialComplex::from_simplices(&[s.clone()])).map_err(fail)?;
        let eta = ZMap::from_fn(whole, |x| piece.eval(x)).map_err(fail)?;
        ensure(equals(&compose(&eta, &out.rho).map_err(fail)?, &eta).map_err(fail)?, format!("context {case}: eta∘rho ≠ eta"))?;
        ensure(s.contains(&out.y), format!("context {case}: y outside S"))?;
        ensure(!out.rho.image().contains_point(&out.y), format!("context {case}: y in the image"))?;
        for drop_g in (0..=n).filter(|&g| g != drop) {
            let g: Vec<Point> = s.vertices().iter().enumerate().filter(|&(i, _)| i != drop_g).map(|(_, p)| p.clone()).collect();
            for _ in 0..20 {
                let x = rand_in_simplex(&mut rng, &g, 12);
                ensure(out.rho.evaluate(&x).map_err(fail)? == x, format!("context {case}: moves a point of another facet"))?;
            }
            for v in out.rho.domain().vertices() {
                if Simplex::new(g.clone()).unwrap().contains(v) {
                    ensure(&out.rho.evaluate(v).map_err(fail)? == v, format!("context {case}: moves a vertex of another facet"))?;
                }
            }
        }
        *done.entry(n).or_insert(0) += 1;
    }
    // the cube-level version used by the generalization step
    for k in 0..4 {
        let eta = ZMap::from_fn(triangulate_cube(2).unwrap(), |x| {
            Point(vec![&x.0[0] * Q::from(BigInt::from(k + 1)) - &x.0[1]])
        })
        .map_err(fail)?;
        let made = make_space_witnessed(&eta).map_err(fail)?;
        emitted.add("make_space", made.alpha.domain());
        ensure(equals(&compose(&eta, &made.alpha).map_err(fail)?, &eta).map_err(fail)?, "make_space changes eta")?;
        ensure(!made.alpha.image().contains_point(&made.y), "make_space is onto")?;
    }
    Ok(format!("{} contexts in dimension 2, {} in dimension 3", done[&2], done[&3]))
}

fn mcnaughton_oracle(emitted: &mut Emitted) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cells = 0;
    for case in 0..500 {
        let m = rng.gen_range(1..=3);
        let t = random_term(&mut rng, 5, m);
        let f = mcnaughton(&t, m).map_err(|e| format!("term {t}: {e}"))?;
        cells += f.domain().simplices().len();
        if case % 25 == 0 {
            emitted.add("mcnaughton", f.domain());
        }
        for _ in 0..50 {
            let x = rand_cube_point(&mut rng, m, 16);
            let got = f.evaluate(&x).map_err(fail)?;
            let want = semantics(&t, &x.0);
            ensure(got.0 == vec![want.clone()], format!("term {t} at {x:?}: {} vs {want}", got.0[0]))?;
        }
    }
    Ok(format!("500 terms, 25000 points, {cells} cells"))
}

fn lift_matches<R: Rng>(rng: &mut R, eta: &ZMap, what: &str) -> Result<Q, String> {
    let l = lift(eta).map_err(fail)?.map;
    let n = eta.domain_dim();
    for v in eta.domain().vertices() {
        let up = l.evaluate(v).map_err(fail)?;
        ensure(zeta(&up.0[0]) == eta.evaluate(v).map_err(fail)?, format!("{what}: lift wrong at vertex"))?;
    }
    for _ in 0..100 {
        let x = rand_cube_point(rng, n, 30);
        let up = l.evaluate(&x).map_err(fail)?;
        ensure(zeta(&up.0[0]) == eta.evaluate(&x).map_err(fail)?, format!("{what}: lift wrong at {x:?}"))?;
    }
    let ys: Vec<&Q> = l.values().iter().map(|v| &v.0[0]).collect();
    let d = *ys.iter().max().unwrap() - *ys.iter().min().unwrap();
    ensure(degree(eta).map_err(fail)? == d, format!("{what}: degree disagrees with the lift"))?;
    Ok(d)
}

fn lifts_and_degrees(chain: &[ChainRecord]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let four = ZMap::from_fn(triangulate_cube(1).unwrap(), |x| Point(vec![&x.0[0] * q(4, 1)])).map_err(fail)?;
    let wrap = compose(&zeta_segment(&BigInt::from(0), &BigInt::from(4)).map_err(fail)?, &four).map_err(fail)?;
    let constant = ZMap::constant(triangulate_cube(2).unwrap(), &Point::from_ints(&[1, 0])).map_err(fail)?;
    for (eta, want, what) in [(iota_prime(), 1, "inclusion"), (wrap, 4, "wrap"), (constant, 0, "constant")] {
        let d = lift_matches(&mut rng, &eta, what)?;
        ensure(d == q(want, 1), format!("{what}: degree {d}, expected {want}"))?;
    }
    let mut ds = Vec::new();
    for (i, r) in chain.iter().enumerate() {
        ds.push(lift_matches(&mut rng, &r.sigma, &format!("sigma {i}"))?);
    }
    for w in ds.windows(2) {
        ensure(w[0] < w[1], "degree does not grow along a factorization")?;
    }
    Ok(format!("3 fixed maps and {} chain maps", chain.len()))
}

fn directory_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn determinism(first: &[ChainRecord]) -> Outcome {
    let tmp = tempfile::tempdir().map_err(fail)?;
    let second = ascending_chain(5, 2).map_err(fail)?;
    for (name, records) in [("a", first), ("b", &second[..])] {
        let report = verify_chain(records, &boundary_problem());
        write_chain(&tmp.path().join(name), records, &report).map_err(fail)?;
    }
    let a = directory_bytes(&tmp.path().join("a"));
    let b = directory_bytes(&tmp.path().join("b"));
    ensure(a.len() == 7, format!("{} files written", a.len()))?;
    ensure(a == b, "chain directories differ")?;
    let bytes: usize = a.values().map(Vec::len).sum();
    Ok(format!("{} files, {bytes} bytes identical", a.len()))
}

fn regularity(emitted: &mut Emitted, chain: &[ChainRecord]) -> Outcome {
    for n in 1..=4 {
        emitted.add("cube", triangulate_cube(n).map_err(fail)?.complex());
    }
    let tri = |v: &[(i64, i64)]| Polyhedron::from_points(&v.iter().map(|&(a, b)| Point::from_ints(&[a, b])).collect::<Vec<_>>());
    let half = |v: &[(i64, i64, i64)]| Polyhedron::from_points(&v.iter().map(|&(a, b, d)| Point(vec![q(a, d), q(b, d)])).collect::<Vec<_>>());
    for family in [
        vec![Polyhedron::cube(2), tri(&[(0, 0), (1, 1), (1, 0)])],
        vec![half(&[(0, 0, 1), (1, 0, 1), (1, 2, 3)]), half(&[(0, 0, 1), (1, 1, 2), (0, 1, 1)])],
        vec![Polyhedron::cube(3)],
    ] {
        emitted.add("joint_refinement", joint_refinement(&family).map_err(fail)?.complex());
    }
    for r in chain {
        emitted.add("chain sigma", r.sigma.domain());
        if let Some(a) = &r.alpha {
            emitted.add("chain alpha", a.domain());
        }
    }
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for (what, c) in &emitted.0 {
        ensure(complex_is_unimodular(c), format!("{what}: a simplex is not unimodular"))?;
        *by_kind.entry(what).or_insert(0) += 1;
    }
    let summary: Vec<String> = by_kind.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!("{} triangulations ({})", emitted.0.len(), summary.join(", ")))
}

struct Line {
    number: usize,
    name: &'static str,
    budget: Duration,
    elapsed: Duration,
    outcome: Outcome,
}

fn timed(number: usize, name: &'static str, budget_secs: u64, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    Line {
        number,
        name,
        budget: Duration::from_secs(budget_secs),
        elapsed: start.elapsed(),
        outcome,
    }
}

fn main() {
    let mut emitted = Emitted::default();
    let mut chain = None;
    let mut lines = vec![
        timed(1, "problem dualization", 10, dualization),
        timed(2, "chain certificate", 300, || chain_certificate(&mut chain)),
    ];
    let first_run = lines[1].elapsed;
    let records = chain.unwrap_or_default();
    lines.push(timed(4, "unique extension", 60, || unique_extension(&mut emitted)));
    lines.push(timed(5, "equal denominators", 30, equal_denominators));
    lines.push(timed(6, "squeezing contract", 120, || squeezing(&mut emitted)));
    lines.push(timed(7, "McNaughton oracle", 120, || mcnaughton_oracle(&mut emitted)));
    lines.push(timed(8, "lift and degree", 60, || lifts_and_degrees(&records)));
    let mut det = timed(9, "determinism", 600, || determinism(&records));
    det.elapsed += first_run;
    lines.push(det);
    lines.push(timed(3, "regularity recheck", 120, || regularity(&mut emitted, &records)));
    lines.sort_by_key(|l| l.number);

    let mut failed = Vec::new();
    for l in &lines {
        let over = l.elapsed > l.budget;
        let ok = l.outcome.is_ok() && !over;
        let detail = match &l.outcome {
            Ok(s) if over => format!("{s}; over budget {:?}", l.budget),
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!(
            "criterion {}: {} {} ({:.1}s) {}",
            l.number,
            if ok { "PASS" } else { "FAIL" },
            l.name,
            l.elapsed.as_secs_f64(),
            detail
        );
        if !ok {
            failed.push(l.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
