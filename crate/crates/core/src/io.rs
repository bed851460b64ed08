//! Germ, matrix and parameter files.
//!
//! A germ file is a JSON object
//! `{"variables": n, "order": m, "coefficient_ring": tag, "terms": [...]}` where
//! each term is `{"coordinate": j, "exponents": [...], "value": scalar}` with a
//! 1-based coordinate. Missing terms are zero.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jet::{GermJet, MultiIndex, ScalarJet};
use crate::linalg::Matrix;
use crate::rings::serial::{RingTag, ScalarCodec};
use crate::rings::{embed_constant, BigComplex, ExactComplex, ParamPoly};

/// A germ read from a file whose ring is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyGerm {
    Exact(GermJet<ExactComplex>),
    BigFloat(GermJet<BigComplex>),
    ParamExact(GermJet<ParamPoly<ExactComplex>>),
}

impl AnyGerm {
    pub fn tag(&self) -> RingTag {
        match self {
            AnyGerm::Exact(_) => RingTag::Exact,
            AnyGerm::BigFloat(g) => RingTag::BigFloat(bigfloat_bits(g)),
            AnyGerm::ParamExact(_) => RingTag::ParamExact,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyGerm::Exact(g) => g.n(),
            AnyGerm::BigFloat(g) => g.n(),
            AnyGerm::ParamExact(g) => g.n(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AnyGerm::Exact(g) => g.order(),
            AnyGerm::BigFloat(g) => g.order(),
            AnyGerm::ParamExact(g) => g.order(),
        }
    }

    /// The germ over exact Gaussian rationals; other rings are refused.
    pub fn into_exact(self) -> Result<GermJet<ExactComplex>> {
        match self {
            AnyGerm::Exact(g) => Ok(g),
            _ => Err(Error::InexactCoefficients),
        }
    }

    /// The germ over `Q(i)[t]`; exact germs are embedded as constant families.
    pub fn into_param(self) -> Result<GermJet<ParamPoly<ExactComplex>>> {
        match self {
            AnyGerm::ParamExact(g) => Ok(g),
            AnyGerm::Exact(g) => Ok(g.map_coeffs(embed_constant)),
            AnyGerm::BigFloat(_) => Err(Error::InexactCoefficients),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyGerm::Exact(g) => germ_to_json(g),
            AnyGerm::BigFloat(g) => germ_to_json(g),
            AnyGerm::ParamExact(g) => germ_to_json(g),
        }
    }
}

fn bigfloat_bits(g: &GermJet<BigComplex>) -> usize {
    g.components()
        .iter()
        .flat_map(|c| c.coeffs().iter().map(BigComplex::precision))
        .max()
        .unwrap_or(crate::rings::MIN_PRECISION)
}

/// Serializes a germ; terms are listed by coordinate, then graded-lex order.
pub fn germ_to_json<R: ScalarCodec>(f: &GermJet<R>) -> Value {
    let mut tag = R::zero().tag();
    let mut terms = Vec::new();
    for (j, c) in f.components().iter().enumerate() {
        for (i, v) in c.terms() {
            tag = wider(tag, v.tag());
            terms.push(json!({ "coordinate": j + 1, "exponents": i.exps(), "value": v.to_json() }));
        }
    }
    json!({
        "variables": f.n(),
        "order": f.order(),
        "coefficient_ring": tag.to_string(),
        "terms": terms,
    })
}

fn wider(a: RingTag, b: RingTag) -> RingTag {
    match (a, b) {
        (RingTag::BigFloat(x), RingTag::BigFloat(y)) => RingTag::BigFloat(x.max(y)),
        _ => a,
    }
}

pub fn write_germ<R: ScalarCodec>(f: &GermJet<R>, path: impl AsRef<Path>) -> Result<()> {
    write_json(&germ_to_json(f), path)
}

pub fn read_germ(path: impl AsRef<Path>) -> Result<AnyGerm> {
    parse_germ(&read_text(path)?)
}

pub fn parse_germ(text: &str) -> Result<AnyGerm> {
    germ_from_json(&parse_json(text)?)
}

pub fn germ_from_json(v: &Value) -> Result<AnyGerm> {
    let tag: RingTag = match v.get("coefficient_ring") {
        None => RingTag::Exact,
        Some(t) => t.as_str().ok_or_else(|| Error::parse("coefficient_ring", "expected a string"))?.parse()?,
    };
    Ok(match tag {
        RingTag::Exact => AnyGerm::Exact(germ_from_value(v, tag)?),
        RingTag::BigFloat(_) => AnyGerm::BigFloat(germ_from_value(v, tag)?),
        RingTag::ParamExact => AnyGerm::ParamExact(germ_from_value(v, tag)?),
    })
}

fn positive(v: &Value, name: &str) -> Result<usize> {
    let x = v.get(name).ok_or_else(|| Error::parse(name, "missing field"))?;
    match x.as_u64() {
        Some(k) if k >= 1 => Ok(k as usize),
        _ => Err(Error::parse(name, format!("expected a positive integer, found {x}"))),
    }
}

fn germ_from_value<R: ScalarCodec>(v: &Value, tag: RingTag) -> Result<GermJet<R>> {
    if !v.is_object() {
        return Err(Error::parse("$", "expected a germ object"));
    }
    let n = positive(v, "variables")?;
    let m = positive(v, "order")?;
    let terms = v
        .get("terms")
        .ok_or_else(|| Error::parse("terms", "missing field"))?
        .as_array()
        .ok_or_else(|| Error::parse("terms", "expected an array"))?;
    let mut comps = vec![ScalarJet::<R>::zero(n, m); n];
    let mut seen = HashSet::new();
    for (k, t) in terms.iter().enumerate() {
        let at = format!("terms[{k}]");
        let j = match t.get("coordinate").and_then(Value::as_u64) {
            Some(j) if (1..=n as u64).contains(&j) => j as usize,
            _ => return Err(Error::parse(format!("{at}.coordinate"), format!("expected an integer in 1..={n}"))),
        };
        let exps = t
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(format!("{at}.exponents"), "expected an array"))?;
        if exps.len() != n {
            return Err(Error::parse(
                format!("{at}.exponents"),
                format!("has {} entries, expected {n}", exps.len()),
            ));
        }
        let exps = exps
            .iter()
            .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::parse(format!("{at}.exponents"), "expected non-negative integers"))?;
        let i = MultiIndex::new(exps);
        if i.degree() > m {
            return Err(Error::parse(format!("{at}.exponents"), format!("degree {} exceeds order {m}", i.degree())));
        }
        let value = R::from_json(
            t.get("value").ok_or_else(|| Error::parse(format!("{at}.value"), "missing field"))?,
            tag,
            &format!("{at}.value"),
        )?;
        if !seen.insert((j, i.clone())) {
            return Err(Error::parse(at, format!("duplicate term for coordinate {j}, exponents {i}")));
        }
        if i.degree() == 0 && !value.is_zero() {
            return Err(Error::InvariantViolation(format!("{at}: coordinate {j} has a nonzero constant term")));
        }
        comps[j - 1].set_coeff(&i, value)?;
    }
    GermJet::new(comps)
}

/// Reads `{"matrix": [[scalar, ...], ...]}` with exact entries.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix<ExactComplex>> {
    parse_matrix(&read_text(path)?)
}

pub fn parse_matrix(text: &str) -> Result<Matrix<ExactComplex>> {
    let v = parse_json(text)?;
    let rows = v
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("matrix", "expected an array of rows"))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.as_array()
                .ok_or_else(|| Error::parse(format!("matrix[{r}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(c, x)| ExactComplex::from_json(x, RingTag::Exact, &format!("matrix[{r}][{c}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_rows(rows)?;
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::parse("matrix", "expected a nonempty square matrix"));
    }
    Ok(m)
}

pub fn matrix_to_json(a: &Matrix<ExactComplex>) -> Value {
    json!({ "matrix": (0..a.rows()).map(|r| a.row(r).iter().map(ScalarCodec::to_json).collect::<Vec<_>>()).collect::<Vec<_>>() })
}

/// Reads a JSON array of exact scalars.
pub fn read_params(path: impl AsRef<Path>) -> Result<Vec<ExactComplex>> {
    parse_params(&read_text(path)?)
}

pub fn parse_params(text: &str) -> Result<Vec<ExactComplex>> {
    let v = parse_json(text)?;
    v.as_array()
        .ok_or_else(|| Error::parse("$", "expected an array of scalars"))?
        .iter()
        .enumerate()
        .map(|(k, x)| ExactComplex::from_json(x, RingTag::Exact, &format!("[{k}]")))
        .collect()
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn write_json(v: &Value, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Parses JSON, reporting syntax errors by line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}
