//! Strictly ascending chains of unifiers above `ι′` and their verification.

use std::collections::BTreeMap;

use crate::cover::{degree, generalize, nonconstant_on_corners};
use crate::error::{Error, Result};
use crate::linalg::{int, Rational};
use crate::mv::{check_unifier, UnificationProblem};
use crate::point::Point;
use crate::triangulation::{is_regular, triangulate_cube};
use crate::zmap::{compose, equals, ZMap};

/// The flagship problem whose solutions are the boundary of the unit square.
pub const BOUNDARY_PROBLEM: &str = "x1 \\/ x2 \\/ ~x1 \\/ ~x2 = 1";

pub fn boundary_problem() -> UnificationProblem {
    UnificationProblem::parse(BOUNDARY_PROBLEM, 2).expect("well-formed problem")
}

/// `x ↦ (x, 0)` on the one-edge triangulation of `[0,1]`.
pub fn iota_prime() -> ZMap {
    ZMap::from_fn(triangulate_cube(1).expect("unit interval"), |x| {
        Point(vec![x.0[0].clone(), int(0)])
    })
    .expect("integral map")
}

/// `η` on `[0,1]ⁿ`, ignoring the coordinates beyond its own domain.
pub fn pad_to(eta: &ZMap, n: usize) -> Result<ZMap> {
    let m = eta.domain_dim();
    if m >= n {
        return Ok(eta.clone());
    }
    let proj = ZMap::from_fn(triangulate_cube(n)?, |x| Point(x.0[..m].to_vec()))?;
    compose(eta, &proj)
}

#[derive(Clone, Debug)]
pub struct ChainRecord {
    pub index: usize,
    pub sigma: ZMap,
    /// `σᵢ∘α = σᵢ₋₁`; absent for the first record.
    pub alpha: Option<ZMap>,
    pub degree: Rational,
}

pub fn ascending_chain(k: usize, n: usize) -> Result<Vec<ChainRecord>> {
    if !(2..=4).contains(&n) {
        return Err(Error::DimensionTooLow(format!(
            "chains need 2 to 4 variables, got {n}"
        )));
    }
    let sigma = pad_to(&iota_prime(), n)?;
    let mut records = vec![ChainRecord {
        index: 0,
        degree: degree(&sigma)?,
        sigma,
        alpha: None,
    }];
    for index in 1..=k {
        let prev = &records[index - 1].sigma;
        let g = generalize(prev)?;
        records.push(ChainRecord {
            index,
            degree: degree(&g.theta)?,
            sigma: g.theta,
            alpha: Some(g.alpha),
        });
    }
    let report = verify_chain(&records, &boundary_problem());
    if let Some((name, _)) = report.verdicts.iter().find(|(_, ok)| !**ok) {
        return Err(Error::VerificationFailed(name.clone()));
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub problem: String,
    pub n: usize,
    pub steps: usize,
    pub degrees: Vec<Rational>,
    pub verdicts: BTreeMap<String, bool>,
}

impl ChainReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }
}

/// Re-derives every chain invariant from the records alone.
pub fn verify_chain(records: &[ChainRecord], problem: &UnificationProblem) -> ChainReport {
    let n = records.first().map_or(0, |r| r.sigma.domain_dim());
    let degrees: Vec<Option<Rational>> = records.iter().map(|r| degree(&r.sigma).ok()).collect();

    let regular = records.iter().all(|r| {
        is_regular(r.sigma.domain())
            && r.alpha.as_ref().map_or(true, |a| is_regular(a.domain()))
    });
    let dims = records.iter().all(|r| {
        r.sigma.domain_dim() == n
            && r.alpha
                .as_ref()
                .map_or(true, |a| a.domain_dim() == n && a.codomain_dim() == n)
    });
    let indices = records.iter().enumerate().all(|(i, r)| r.index == i);
    let unifier = records
        .iter()
        .all(|r| check_unifier(problem, &r.sigma).unwrap_or(false));
    let composition = records.iter().enumerate().all(|(i, r)| match (i, &r.alpha) {
        (0, None) => true,
        (0, Some(_)) | (_, None) => false,
        (_, Some(a)) => compose(&r.sigma, a)
            .and_then(|c| equals(&c, &records[i - 1].sigma))
            .unwrap_or(false),
    });
    let stored = records
        .iter()
        .zip(&degrees)
        .all(|(r, d)| d.as_ref() == Some(&r.degree));
    let increasing = degrees.windows(2).all(|w| match (&w[0], &w[1]) {
        (Some(a), Some(b)) => a < b,
        _ => false,
    });
    let base = degrees.first().map_or(true, |d| d.as_ref() == Some(&int(1)));
    let corners = records.iter().all(|r| nonconstant_on_corners(&r.sigma));

    let verdicts = [
        ("base_degree", base),
        ("composition", composition),
        ("corners", corners),
        ("degrees", stored),
        ("dimensions", dims),
        ("increasing", increasing),
        ("indices", indices),
        ("regular", regular),
        ("unifier", unifier),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    ChainReport {
        problem: problem.to_string(),
        n,
        steps: records.len().saturating_sub(1),
        degrees: records.iter().map(|r| r.degree.clone()).collect(),
        verdicts,
    }
}
