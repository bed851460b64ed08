//! JSON encodings of scalars.
//!
//! Rationals are `"p/q"` strings, exact complex scalars are
//! `{"re": "p/q", "im": "p/q"}`, big-float scalars use the same object shape
//! with exact hexadecimal strings (decimal literals are accepted on input),
//! and parameter polynomials are arrays of scalars by ascending power.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::exact::{format_rational, parse_rational};
use super::{real, BigComplex, ExactComplex, ParamPoly, Ring, MIN_PRECISION};
use crate::error::{Error, Result};

/// Tag naming the coefficient ring of a serialized jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Exact,
    BigFloat(usize),
    ParamExact,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Exact => write!(f, "exact"),
            RingTag::BigFloat(bits) => write!(f, "bigfloat:{bits}"),
            RingTag::ParamExact => write!(f, "param-exact"),
        }
    }
}

impl FromStr for RingTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RingTag::Exact),
            "param-exact" => Ok(RingTag::ParamExact),
            other => {
                let bits = other
                    .strip_prefix("bigfloat:")
                    .and_then(|b| b.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse("coefficient_ring", format!("unknown ring {other:?}")))?;
                if bits < MIN_PRECISION {
                    return Err(Error::parse("coefficient_ring", format!("precision {bits} below {MIN_PRECISION}")));
                }
                Ok(RingTag::BigFloat(bits))
            }
        }
    }
}

/// Scalars that can be written to and read from germ files.
pub trait ScalarCodec: Ring {
    fn tag(&self) -> RingTag;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, tag: RingTag, at: &str) -> Result<Self>;
}

fn field<'a>(v: &'a Value, name: &str, at: &str) -> Result<&'a str> {
    v.get(name)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(format!("{at}.{name}"), "expected a string"))
}

impl ScalarCodec for ExactComplex {
    fn tag(&self) -> RingTag {
        RingTag::Exact
    }

    fn to_json(&self) -> Value {
        json!({ "re": format_rational(&self.re), "im": format_rational(&self.im) })
    }

    /// Accepts the object form or a bare `"p/q"` string for real values.
    fn from_json(v: &Value, _tag: RingTag, at: &str) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return parse_rational(s).map(ExactComplex::from_real).map_err(|m| Error::parse(at, m));
        }
        if let Some(i) = v.as_i64() {
            return Ok(ExactComplex::from_i64(i));
        }
        let re = parse_rational(field(v, "re", at)?).map_err(|m| Error::parse(format!("{at}.re"), m))?;
        let im = match v.get("im") {
            None => num_rational::BigRational::from_integer(0.into()),
            Some(_) => parse_rational(field(v, "im", at)?).map_err(|m| Error::parse(format!("{at}.im"), m))?,
        };
        Ok(ExactComplex::new(re, im))
    }
}

impl ScalarCodec for BigComplex {
    fn tag(&self) -> RingTag {
        RingTag::BigFloat(self.precision())
    }

    fn to_json(&self) -> Value {
        json!({ "re": real::format_hex(self.re()), "im": real::format_hex(self.im()) })
    }

    fn from_json(v: &Value, tag: RingTag, at: &str) -> Result<Self> {
        let bits = match tag {
            RingTag::BigFloat(b) => b,
            _ => MIN_PRECISION,
        };
        let parse = |s: &str, name: &str| {
            real::parse_any(s, bits).map_err(|_| Error::parse(format!("{at}.{name}"), format!("bad number {s:?}")))
        };
        if let Some(s) = v.as_str() {
            return Ok(BigComplex::new(parse(s, "re")?, real::zero(bits), bits));
        }
        let re = parse(field(v, "re", at)?, "re")?;
        let im = match v.get("im") {
            None => real::zero(bits),
            Some(_) => parse(field(v, "im", at)?, "im")?,
        };
        Ok(BigComplex::new(re, im, bits))
    }
}

impl ScalarCodec for ParamPoly<ExactComplex> {
    fn tag(&self) -> RingTag {
        RingTag::ParamExact
    }

    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(ScalarCodec::to_json).collect())
    }

    fn from_json(v: &Value, _tag: RingTag, at: &str) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::parse(at, "expected an array of coefficients"))?;
        let coeffs = arr
            .iter()
            .enumerate()
            .map(|(k, c)| ExactComplex::from_json(c, RingTag::Exact, &format!("{at}[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_scalar_format() {
        let c = ExactComplex::new(parse_rational("1/2").unwrap(), parse_rational("-3").unwrap());
        assert_eq!(c.to_json(), json!({"re": "1/2", "im": "-3/1"}));
        assert_eq!(ExactComplex::from_json(&c.to_json(), RingTag::Exact, "x").unwrap(), c);
        assert_eq!(ExactComplex::from_json(&json!("4/6"), RingTag::Exact, "x").unwrap(), ExactComplex::from_ratio(2, 3));
        let err = ExactComplex::from_json(&json!({"re": "1/0"}), RingTag::Exact, "terms[0].value").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "terms[0].value.re"));
    }

    #[test]
    fn param_poly_is_ascending_array() {
        let p = ParamPoly::new(vec![ExactComplex::from_i64(1), ExactComplex::zero(), ExactComplex::from_ratio(1, 2)]);
        let v = p.to_json();
        assert_eq!(v.as_array().unwrap().len(), 3);
        assert_eq!(ParamPoly::from_json(&v, RingTag::ParamExact, "p").unwrap(), p);
    }

    #[test]
    fn ring_tags_round_trip() {
        for tag in [RingTag::Exact, RingTag::BigFloat(256), RingTag::ParamExact] {
            assert_eq!(tag.to_string().parse::<RingTag>().unwrap(), tag);
        }
        assert!("bigfloat:12".parse::<RingTag>().is_err());
        assert!("float".parse::<RingTag>().is_err());
    }
}
