//! Fixture records and their text format.
//!
//! ```text
//! [curve]
//! prime = 10007
//! degree = 5
//! coeffs = (5,0,0,3), (4,1,0,-2), ...
//! nodes = (0,0,1)
//! seed = 17
//! [points]
//! marked = (12,40,1), (13,7,1)
//! [meta]
//! name = F2
//! declared_genus = 5
//! declared_gonality = 3
//! declared_clifford = 1
//! provenance = ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Exp, FieldCtx};
use crate::error::{Error, Result};
use crate::plane::curve::{PlaneCurve, Point};

use super::construct::{reduce_point, reduce_poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredProfile {
    pub genus: usize,
    pub gonality: Option<usize>,
    pub clifford: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureRecord {
    pub name: String,
    pub prime: u32,
    pub degree: u32,
    pub coeffs: Vec<(Exp, BigInt)>,
    pub nodes: Vec<[i64; 3]>,
    pub seed: u64,
    pub marked: Vec<Point>,
    pub declared: DeclaredProfile,
    pub provenance: String,
}

impl FixtureRecord {
    /// The validated curve at the record's own prime, with its marked points.
    pub fn curve(&self) -> Result<PlaneCurve> {
        let ctx = FieldCtx::new(self.prime as u64)?;
        let base = self.curve_at(ctx)?;
        base.with_marked(&self.marked)
    }

    /// The validated curve at another prime, without marked points.
    pub fn curve_at(&self, ctx: FieldCtx) -> Result<PlaneCurve> {
        let f = reduce_poly(ctx, self.degree, &self.coeffs)?;
        if f.is_zero() {
            return Err(Error::InvalidModel(format!("{} vanishes modulo {}", self.name, ctx.p())));
        }
        let nodes: Vec<Point> = self.nodes.iter().map(|&p| reduce_point(ctx, p)).collect();
        PlaneCurve::new(f, &nodes, &[])
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let tuple = |v: &[String]| format!("({})", v.join(","));
        writeln!(s, "[curve]").unwrap();
        writeln!(s, "prime = {}", self.prime).unwrap();
        writeln!(s, "degree = {}", self.degree).unwrap();
        let coeffs: Vec<String> =
            self.coeffs.iter().map(|(e, c)| tuple(&[e[0].to_string(), e[1].to_string(), e[2].to_string(), c.to_string()])).collect();
        writeln!(s, "coeffs = {}", coeffs.join(", ")).unwrap();
        let nodes: Vec<String> = self.nodes.iter().map(|n| tuple(&n.map(|c| c.to_string()))).collect();
        writeln!(s, "nodes = {}", nodes.join(", ")).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        writeln!(s, "[points]").unwrap();
        let marked: Vec<String> = self.marked.iter().map(|n| tuple(&n.map(|c| c.to_string()))).collect();
        writeln!(s, "marked = {}", marked.join(", ")).unwrap();
        writeln!(s, "[meta]").unwrap();
        writeln!(s, "name = {}", self.name).unwrap();
        writeln!(s, "declared_genus = {}", self.declared.genus).unwrap();
        if let Some(d) = self.declared.gonality {
            writeln!(s, "declared_gonality = {d}").unwrap();
        }
        if let Some(c) = self.declared.clifford {
            writeln!(s, "declared_clifford = {c}").unwrap();
        }
        writeln!(s, "provenance = {}", self.provenance).unwrap();
        s
    }

    /// Parses and validates a fixture file; the declared genus must match.
    pub fn parse(text: &str) -> Result<FixtureRecord> {
        let mut section = String::new();
        let mut fields: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if !["curve", "points", "meta"].contains(&section.as_str()) {
                    return Err(parse_err(i + 1, format!("unknown section [{section}]")));
                }
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| parse_err(i + 1, "expected key = value".into()))?;
            if section.is_empty() {
                return Err(parse_err(i + 1, "key outside any section".into()));
            }
            let key = format!("{section}.{}", k.trim());
            if fields.iter().any(|f| f.0 == key) {
                return Err(parse_err(i + 1, format!("duplicate key {key}")));
            }
            fields.push((key, v.trim().to_string(), i + 1));
        }
        let get = |key: &str| fields.iter().find(|f| f.0 == key).map(|f| (f.1.as_str(), f.2));
        let need = |key: &str| get(key).ok_or_else(|| parse_err(0, format!("missing {key}")));
        let num = |key: &str| -> Result<u64> {
            let (v, line) = need(key)?;
            v.parse().map_err(|_| parse_err(line, format!("{key} must be a non-negative integer")))
        };
        let opt_num = |key: &str| -> Result<Option<usize>> {
            match get(key) {
                None => Ok(None),
                Some((v, line)) => v.parse().map(Some).map_err(|_| parse_err(line, format!("{key} must be an integer"))),
            }
        };

        let prime = num("curve.prime")?;
        let ctx = FieldCtx::new(prime)?;
        let degree = num("curve.degree")? as u32;
        let (coeff_text, coeff_line) = need("curve.coeffs")?;
        let mut coeffs = Vec::new();
        for t in parse_tuples(coeff_text, coeff_line)? {
            if t.len() != 4 {
                return Err(parse_err(coeff_line, "coefficient tuples are (i,j,k,c)".into()));
            }
            let e: Vec<u32> =
                t[..3].iter().map(|x| x.parse().map_err(|_| parse_err(coeff_line, format!("bad exponent {x}")))).collect::<Result<_>>()?;
            if e.iter().sum::<u32>() != degree {
                return Err(parse_err(coeff_line, format!("exponent {e:?} does not sum to degree {degree}")));
            }
            let c: BigInt = t[3].parse().map_err(|_| parse_err(coeff_line, format!("bad coefficient {}", t[3])))?;
            coeffs.push(([e[0], e[1], e[2]], c));
        }
        let triples_i64 = |key: &str| -> Result<Vec<[i64; 3]>> {
            let Some((text, line)) = get(key) else { return Ok(Vec::new()) };
            parse_tuples(text, line)?
                .into_iter()
                .map(|t| {
                    if t.len() != 3 {
                        return Err(parse_err(line, "points are (x,y,z)".into()));
                    }
                    let v: Vec<i64> =
                        t.iter().map(|x| x.parse().map_err(|_| parse_err(line, format!("bad coordinate {x}")))).collect::<Result<_>>()?;
                    Ok([v[0], v[1], v[2]])
                })
                .collect()
        };
        let nodes = triples_i64("curve.nodes")?;
        let marked = triples_i64("points.marked")?.into_iter().map(|p| reduce_point(ctx, p)).collect();
        let record = FixtureRecord {
            name: need("meta.name")?.0.to_string(),
            prime: prime as u32,
            degree,
            coeffs,
            nodes,
            seed: num("curve.seed")?,
            marked,
            declared: DeclaredProfile {
                genus: num("meta.declared_genus")? as usize,
                gonality: opt_num("meta.declared_gonality")?,
                clifford: opt_num("meta.declared_clifford")?,
            },
            provenance: get("meta.provenance").map_or(String::new(), |v| v.0.to_string()),
        };
        let curve = record.curve()?;
        if curve.genus() != record.declared.genus {
            return Err(Error::FixtureParse {
                line: get("meta.declared_genus").map_or(0, |v| v.1),
                msg: format!("declared genus {} but the model has genus {}", record.declared.genus, curve.genus()),
            });
        }
        Ok(record)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| parse_err(0, format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<FixtureRecord> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(0, format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn parse_err(line: usize, msg: String) -> Error {
    Error::FixtureParse { line, msg }
}

/// `(a,b,c), (d,e,f)` into lists of trimmed fields.
fn parse_tuples(text: &str, line: usize) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| parse_err(line, format!("expected '(' at {rest:?}")))?;
        let close = open.find(')').ok_or_else(|| parse_err(line, "unclosed tuple".into()))?;
        out.push(open[..close].split(',').map(|s| s.trim().to_string()).collect());
        rest = open[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(parse_err(line, format!("expected ',' at {rest:?}")));
        }
    }
    Ok(out)
}
