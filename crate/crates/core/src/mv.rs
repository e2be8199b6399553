//! Łukasiewicz terms: parsing, `[0,1]` semantics, McNaughton maps and
//! solution polyhedra of unification problems.
//!
//! Surface syntax: `~` is negation, `*` strong conjunction, `+` strong
//! disjunction, `/\` min and `\/` max, binding in that order from tightest
//! to loosest. Binary operators associate to the left.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::mesh::Mesh;
use crate::point::Point;
use crate::polyhedron::Polyhedron;
use crate::simplex::Simplex;
use crate::triangulation::triangulate_cube;
use crate::zmap::ZMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    /// 1-based variable index.
    Var(usize),
    Neg(Box<Term>),
    Oplus(Box<Term>, Box<Term>),
    Odot(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn oplus(a: Term, b: Term) -> Term {
        Term::Oplus(Box::new(a), Box::new(b))
    }

    pub fn odot(a: Term, b: Term) -> Term {
        Term::Odot(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn max_var(&self) -> usize {
        match self {
            Term::Zero | Term::One => 0,
            Term::Var(i) => *i,
            Term::Neg(a) => a.max_var(),
            Term::Oplus(a, b) | Term::Odot(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 0,
            Term::Neg(a) => 1 + a.depth(),
            Term::Oplus(a, b) | Term::Odot(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Standard `[0,1]` semantics at `x`.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let one = Rational::one();
        let zero = Rational::zero();
        match self {
            Term::Zero => zero,
            Term::One => one,
            Term::Var(i) => x[i - 1].clone(),
            Term::Neg(a) => one - a.eval(x),
            Term::Oplus(a, b) => (a.eval(x) + b.eval(x)).min(one),
            Term::Odot(a, b) => (a.eval(x) + b.eval(x) - one).max(zero),
            Term::Join(a, b) => a.eval(x).max(b.eval(x)),
            Term::Meet(a, b) => a.eval(x).min(b.eval(x)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Var(i) => write!(f, "x{i}"),
            Term::Neg(a) => write!(f, "~{a}"),
            Term::Oplus(a, b) => write!(f, "({a} + {b})"),
            Term::Odot(a, b) => write!(f, "({a} * {b})"),
            Term::Join(a, b) => write!(f, "({a} \\/ {b})"),
            Term::Meet(a, b) => write!(f, "({a} /\\ {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnificationProblem {
    pub arity: usize,
    pub equations: Vec<(Term, Term)>,
}

impl UnificationProblem {
    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        let mut p = Parser::new(text, Some(arity));
        let equations = p.problem()?;
        Ok(UnificationProblem { arity, equations })
    }

    /// Parses with the arity set to the largest variable index.
    pub fn parse_inferred(text: &str) -> Result<Self> {
        let mut p = Parser::new(text, None);
        let equations = p.problem()?;
        let arity = equations
            .iter()
            .map(|(a, b)| a.max_var().max(b.max_var()))
            .max()
            .unwrap_or(0);
        Ok(UnificationProblem { arity, equations })
    }
}

impl fmt::Display for UnificationProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.equations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{a} = {b}")?;
        }
        Ok(())
    }
}

/// Parses a single term over variables `x1 … xm`.
pub fn parse(text: &str, m: usize) -> Result<Term> {
    let mut p = Parser::new(text, Some(m));
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, arity: Option<usize>) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            arity,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn problem(&mut self) -> Result<Vec<(Term, Term)>> {
        let mut eqs = vec![self.equation()?];
        while self.eat(";") {
            self.skip_ws();
            if self.pos == self.src.len() {
                break;
            }
            eqs.push(self.equation()?);
        }
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("expected ';' or end of input"));
        }
        Ok(eqs)
    }

    fn equation(&mut self) -> Result<(Term, Term)> {
        let a = self.term()?;
        if !self.eat("=") {
            return Err(self.error("expected '='"));
        }
        let b = self.term()?;
        Ok((a, b))
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.meet()?;
        while self.eat("\\/") {
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut t = self.osum()?;
        while self.eat("/\\") {
            t = Term::meet(t, self.osum()?);
        }
        Ok(t)
    }

    fn osum(&mut self) -> Result<Term> {
        let mut t = self.oprod()?;
        while self.eat("+") {
            t = Term::oplus(t, self.oprod()?);
        }
        Ok(t)
    }

    fn oprod(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.eat("*") {
            t = Term::odot(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat("~") {
            return Ok(Term::neg(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.error("unexpected end of input"));
        };
        match c {
            b'0' => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            b'1' => {
                self.pos += 1;
                Ok(Term::One)
            }
            b'(' => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(")") {
                    return Err(self.error("expected ')'"));
                }
                Ok(t)
            }
            b'x' => {
                let start = self.pos;
                self.pos += 1;
                let digits_from = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == digits_from {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let text = std::str::from_utf8(&self.src[digits_from..self.pos]).expect("ascii");
                let index: usize = text.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "variable index too large".into(),
                })?;
                let arity = self.arity.unwrap_or(usize::MAX);
                if index == 0 || index > arity {
                    return Err(Error::Arity {
                        index,
                        arity: self.arity.unwrap_or(0),
                    });
                }
                Ok(Term::Var(index))
            }
            _ => Err(self.error("unexpected character")),
        }
    }
}

/// Evaluates terms as payload columns on one shared mesh, cutting the mesh
/// wherever a binary connective switches branch.
struct Evaluator {
    mesh: Mesh,
    memo: HashMap<Term, usize>,
}

impl Evaluator {
    fn new(m: usize) -> Result<Self> {
        if !(1..=4).contains(&m) {
            return Err(Error::UnsupportedArity(m));
        }
        let cube = triangulate_cube(m)?;
        let mesh = Mesh::from_complex(&cube, vec![Vec::new(); cube.vertices().len()]);
        Ok(Evaluator {
            mesh,
            memo: HashMap::new(),
        })
    }

    fn push_column(&mut self, f: impl Fn(&Point, &[Rational]) -> Rational) -> usize {
        let col = self.mesh.payload.first().map_or(0, |p| p.len());
        for v in 0..self.mesh.points.len() {
            let x = f(&self.mesh.points[v], &self.mesh.payload[v]);
            self.mesh.payload[v].push(x);
        }
        col
    }

    fn column(&mut self, t: &Term) -> usize {
        if let Some(&c) = self.memo.get(t) {
            return c;
        }
        let one = Rational::one();
        let zero = Rational::zero();
        let col = match t {
            Term::Zero => self.push_column(|_, _| Rational::zero()),
            Term::One => self.push_column(|_, _| Rational::one()),
            Term::Var(i) => {
                let i = i - 1;
                self.push_column(move |p, _| p.0[i].clone())
            }
            Term::Neg(a) => {
                let a = self.column(a);
                self.push_column(move |_, w| &one - &w[a])
            }
            Term::Oplus(a, b) | Term::Odot(a, b) => {
                let (a, b) = (self.column(a), self.column(b));
                self.mesh.cut(|_, w| &w[a] + &w[b] - &one);
                if matches!(t, Term::Oplus(..)) {
                    self.push_column(move |_, w| (&w[a] + &w[b]).min(one.clone()))
                } else {
                    self.push_column(move |_, w| (&w[a] + &w[b] - &one).max(zero.clone()))
                }
            }
            Term::Join(a, b) | Term::Meet(a, b) => {
                let (a, b) = (self.column(a), self.column(b));
                self.mesh.cut(|_, w| &w[a] - &w[b]);
                if matches!(t, Term::Join(..)) {
                    self.push_column(move |_, w| w[a].clone().max(w[b].clone()))
                } else {
                    self.push_column(move |_, w| w[a].clone().min(w[b].clone()))
                }
            }
        };
        self.memo.insert(t.clone(), col);
        col
    }
}

/// The McNaughton function of `t` on `[0,1]^m` as a Z-map.
pub fn mcnaughton(t: &Term, m: usize) -> Result<ZMap> {
    if t.max_var() > m {
        return Err(Error::Arity {
            index: t.max_var(),
            arity: m,
        });
    }
    let mut ev = Evaluator::new(m)?;
    let col = ev.column(t);
    for w in ev.mesh.payload.iter_mut() {
        let x = w[col].clone();
        *w = vec![x];
    }
    ZMap::from_mesh(ev.mesh)
}

/// `{x ∈ [0,1]^m : s(x) = t(x) for every equation}` as a union of simplices.
pub fn solution_polyhedron(p: &UnificationProblem) -> Result<Polyhedron> {
    let mut ev = Evaluator::new(p.arity)?;
    let mut diffs = Vec::new();
    for (s, t) in &p.equations {
        let (a, b) = (ev.column(s), ev.column(t));
        let d = ev.push_column(move |_, w| &w[a] - &w[b]);
        ev.mesh.cut(|_, w| w[d].clone());
        diffs.push(d);
    }
    let mut faces: BTreeSet<Vec<Point>> = BTreeSet::new();
    for cid in ev.mesh.live_cells() {
        let ids = ev.mesh.cell(cid).expect("live").to_vec();
        let mut face: Vec<Point> = ids
            .iter()
            .filter(|&&v| diffs.iter().all(|&d| ev.mesh.payload[v][d].is_zero()))
            .map(|&v| ev.mesh.points[v].clone())
            .collect();
        if !face.is_empty() {
            face.sort();
            faces.insert(face);
        }
    }
    let maximal: Vec<Simplex> = faces
        .iter()
        .filter(|f| {
            !faces
                .iter()
                .any(|g| g.len() > f.len() && f.iter().all(|v| g.binary_search(v).is_ok()))
        })
        .map(|f| Simplex::new(f.clone()).expect("face of a simplex"))
        .collect();
    Ok(Polyhedron::from_simplices(&maximal))
}

/// Whether `sigma` maps its cube into the solution polyhedron.
pub fn check_unifier(p: &UnificationProblem, sigma: &ZMap) -> Result<bool> {
    if sigma.codomain_dim() != p.arity {
        return Err(Error::DimensionMismatch {
            expected: p.arity,
            found: sigma.codomain_dim(),
        });
    }
    Ok(sigma.is_into(&solution_polyhedron(p)?))
}
