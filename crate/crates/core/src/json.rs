//! Canonical JSON for triangulations, Z-maps, polyhedra and chains.
//!
//! Rationals are lowest-terms strings `"p/q"` (`"p"` for integers). Objects
//! use sorted keys and output carries no insignificant whitespace.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::chain::{ChainRecord, ChainReport};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::point::Point;
use crate::polyhedron::Polyhedron;
use crate::triangulation::{RegularTriangulation, SimplicialComplex};
use crate::zmap::{extend_vertex_map, ZMap};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let s = v.as_str().ok_or_else(|| bad("expected a rational string"))?;
    parse_rational(s).ok_or_else(|| bad(format!("bad rational {s:?}")))
}

fn points_to_json(points: &[Point]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| Value::Array(p.0.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

fn points_from_json(v: &Value) -> Result<Vec<Point>> {
    array(v, "points")?
        .iter()
        .map(|p| Ok(Point(array(p, "point")?.iter().map(rational_from_json).collect::<Result<_>>()?)))
        .collect()
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("expected an array of {what}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| bad("expected a nonnegative integer"))
}

pub fn complex_to_json(c: &SimplicialComplex) -> Value {
    json!({
        "simplices": c.simplices(),
        "vertices": points_to_json(c.vertices()),
    })
}

pub fn complex_from_json(v: &Value) -> Result<SimplicialComplex> {
    let vertices = points_from_json(field(v, "vertices")?)?;
    let simplices = array(field(v, "simplices")?, "simplices")?
        .iter()
        .map(|s| array(s, "indices")?.iter().map(index).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if simplices.iter().flatten().any(|&i| i >= vertices.len()) {
        return Err(bad("simplex index out of range"));
    }
    SimplicialComplex::new(vertices, simplices)
}

pub fn zmap_to_json(f: &ZMap) -> Value {
    let mut m = match complex_to_json(f.domain()) {
        Value::Object(m) => m,
        _ => unreachable!("complexes serialize to objects"),
    };
    m.insert("values".into(), points_to_json(f.values()));
    Value::Object(m)
}

/// Rebuilds a Z-map, re-certifying regularity and integrality.
pub fn zmap_from_json(v: &Value) -> Result<ZMap> {
    let domain = RegularTriangulation::certify(complex_from_json(v)?)?;
    let values = points_from_json(field(v, "values")?)?;
    if values.len() != domain.vertices().len() {
        return Err(bad("one value per vertex expected"));
    }
    extend_vertex_map(domain, values)
}

pub fn polyhedron_to_json(p: &Polyhedron) -> Value {
    json!({
        "parts": p.parts().iter().map(|t| points_to_json(t.vertices())).collect::<Vec<_>>(),
    })
}

pub fn record_to_json(r: &ChainRecord) -> Value {
    json!({
        "alpha": r.alpha.as_ref().map_or(Value::Null, zmap_to_json),
        "degree": rational_to_json(&r.degree),
        "index": r.index,
        "sigma": zmap_to_json(&r.sigma),
    })
}

pub fn record_from_json(v: &Value) -> Result<ChainRecord> {
    let alpha = match field(v, "alpha")? {
        Value::Null => None,
        a => Some(zmap_from_json(a)?),
    };
    Ok(ChainRecord {
        index: index(field(v, "index")?)?,
        sigma: zmap_from_json(field(v, "sigma")?)?,
        alpha,
        degree: rational_from_json(field(v, "degree")?)?,
    })
}

pub fn report_to_json(r: &ChainReport) -> Value {
    let verdicts: Map<String, Value> = r
        .verdicts
        .iter()
        .map(|(k, v)| (k.clone(), Value::Bool(*v)))
        .collect();
    json!({
        "degrees": r.degrees.iter().map(rational_to_json).collect::<Vec<_>>(),
        "n": r.n,
        "problem": r.problem,
        "steps": r.steps,
        "verdicts": verdicts,
    })
}

pub fn report_from_json(v: &Value) -> Result<ChainReport> {
    let verdicts = field(v, "verdicts")?
        .as_object()
        .ok_or_else(|| bad("verdicts must be an object"))?
        .iter()
        .map(|(k, b)| Ok((k.clone(), b.as_bool().ok_or_else(|| bad("verdict must be boolean"))?)))
        .collect::<Result<_>>()?;
    Ok(ChainReport {
        problem: field(v, "problem")?
            .as_str()
            .ok_or_else(|| bad("problem must be a string"))?
            .to_string(),
        n: index(field(v, "n")?)?,
        steps: index(field(v, "steps")?)?,
        degrees: array(field(v, "degrees")?, "degrees")?
            .iter()
            .map(rational_from_json)
            .collect::<Result<_>>()?,
        verdicts,
    })
}

pub fn to_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn from_str(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| bad(e.to_string()))
}

pub fn read_value(path: &Path) -> Result<Value> {
    from_str(&fs::read_to_string(path)?)
}

pub fn write_value(path: &Path, v: &Value) -> Result<()> {
    fs::write(path, to_string(v))?;
    Ok(())
}

/// Writes `step_<i>.json` for every record and `report.json`.
pub fn write_chain(dir: &Path, records: &[ChainRecord], report: &ChainReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in records {
        write_value(&dir.join(format!("step_{}.json", r.index)), &record_to_json(r))?;
    }
    write_value(&dir.join("report.json"), &report_to_json(report))
}

/// Reads `step_0.json`, `step_1.json`, … until the first gap.
pub fn read_chain(dir: &Path) -> Result<Vec<ChainRecord>> {
    if !dir.is_dir() {
        return Err(Error::Io(format!("{} is not a directory", dir.display())));
    }
    let mut out = Vec::new();
    loop {
        let p = dir.join(format!("step_{}.json", out.len()));
        if !p.exists() {
            return Ok(out);
        }
        out.push(record_from_json(&read_value(&p)?)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ascending_chain, boundary_problem, iota_prime, verify_chain};
    use crate::linalg::rat;
    use crate::zmap::equals;

    #[test]
    fn rationals() {
        assert_eq!(rational_to_json(&rat(-6, 4)), json!("-3/2"));
        assert_eq!(rational_to_json(&rat(4, 2)), json!("2"));
        assert_eq!(rational_from_json(&json!("6/4")).unwrap(), rat(3, 2));
        assert!(rational_from_json(&json!(1.5)).is_err());
        assert!(rational_from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn zmap_roundtrip() {
        let f = iota_prime();
        let s = to_string(&zmap_to_json(&f));
        assert_eq!(s, r#"{"simplices":[[0,1]],"values":[["0","0"],["1","0"]],"vertices":[["0"],["1"]]}"#);
        let g = zmap_from_json(&from_str(&s).unwrap()).unwrap();
        assert!(equals(&f, &g).unwrap());
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(from_str("{"), Err(Error::Format(_))));
        let v = json!({"simplices": [[0, 2]], "vertices": [["0"], ["1"]], "values": [["0"], ["1"]]});
        assert!(matches!(zmap_from_json(&v), Err(Error::Format(_))));
        let v = json!({"simplices": [[0, 1]], "vertices": [["0"], ["1"]], "values": [["1/2"], ["1"]]});
        assert!(zmap_from_json(&v).is_err());
    }

    #[test]
    fn chain_roundtrip() {
        let c = ascending_chain(1, 2).unwrap();
        let p = boundary_problem();
        let before = verify_chain(&c, &p);
        let back: Vec<ChainRecord> = c
            .iter()
            .map(|r| record_from_json(&from_str(&to_string(&record_to_json(r))).unwrap()).unwrap())
            .collect();
        assert_eq!(verify_chain(&back, &p), before);
        let rep = report_from_json(&report_to_json(&before)).unwrap();
        assert_eq!(rep, before);
    }
}
