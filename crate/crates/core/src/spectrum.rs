//! Declared multiplicative structure of eigenvalues, resonances and the
//! invariants `l(A)`, `q(A)`.
//!
//! Symbolic eigenvalues are `λ_k = ε^{a_k} μ^{b_k}` with `ε = e^{2πi/q_ε}` and
//! `μ = e^{2πiθ}`. A rational `θ = p/q` is folded into the torsion part before
//! anything else, so downstream code only sees a root-of-unity modulus `Q`,
//! residues `c_k` and, for irrational `θ`, the integer exponents `b_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jet::{JetSpace, MultiIndex};
use crate::linalg::Matrix;
use crate::rings::real::{self, BigFloat};
use crate::rings::serial::{RingTag, ScalarCodec};
use crate::rings::{pow, ExactComplex, Ring};

#[derive(Debug, Clone, PartialEq)]
pub enum Theta {
    Rational(BigRational),
    /// A real rotation number the caller asserts to be irrational.
    Irrational { value: BigFloat, bits: usize },
}

impl Theta {
    pub fn rational(p: i64, q: i64) -> Self {
        Theta::Rational(BigRational::new(p.into(), q.into()))
    }

    /// The value at `bits` of precision.
    pub fn value(&self, bits: usize) -> BigFloat {
        match self {
            Theta::Rational(r) => real::from_rational(r, bits),
            Theta::Irrational { value, .. } => {
                let mut v = value.clone();
                v.set_precision(real::w(bits), real::RM).expect("precision change");
                v
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Theta::Rational(r) => json!({ "rational": format!("{}/{}", r.numer(), r.denom()) }),
            Theta::Irrational { value, bits } => {
                json!({ "real": real::format_hex(value), "bits": bits, "assume_irrational": true })
            }
        }
    }

    pub fn from_json(v: &Value, at: &str) -> Result<Self> {
        if let Some(r) = v.get("rational") {
            let s = r.as_str().ok_or_else(|| Error::parse(format!("{at}.rational"), "expected \"p/q\""))?;
            let c = ExactComplex::from_json(&Value::String(s.into()), RingTag::Exact, &format!("{at}.rational"))?;
            return Ok(Theta::Rational(c.re));
        }
        let s = v
            .get("real")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(at, "expected {\"rational\": ...} or {\"real\": ...}"))?;
        let bits = v.get("bits").and_then(Value::as_u64).unwrap_or(256) as usize;
        if bits < crate::rings::MIN_PRECISION {
            return Err(Error::parse(format!("{at}.bits"), format!("precision {bits} below 53")));
        }
        if v.get("assume_irrational").and_then(Value::as_bool) != Some(true) {
            return Err(Error::parse(
                format!("{at}.assume_irrational"),
                "a real rotation number must be declared irrational; give rational values as {\"rational\": \"p/q\"}",
            ));
        }
        let value = real::parse_any(s, bits).map_err(|_| Error::parse(format!("{at}.real"), format!("bad number {s:?}")))?;
        Ok(Theta::Irrational { value, bits })
    }
}

/// Eigenvalues of a diagonalizable linear part.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenSpec {
    Exact(Vec<ExactComplex>),
    Symbolic { torsion_order: u64, a: Vec<i64>, b: Vec<i64>, theta: Option<Theta> },
}

/// Symbolic spectrum after folding a rational `θ` into torsion:
/// `λ_k = e^{2πi c_k / modulus} · μ^{b_k}`, with `b = 0` unless `θ` is irrational.
#[derive(Debug, Clone, PartialEq)]
pub struct Folded {
    pub modulus: u64,
    pub c: Vec<i64>,
    pub b: Vec<i64>,
    pub theta: Option<Theta>,
}

impl Folded {
    /// `(Σ c_k i_k − c_j mod Q, Σ b_k i_k − b_j)` for the pair `(i, j)`.
    pub fn exponents(&self, i: &MultiIndex, j: usize) -> (i64, i64) {
        let q = self.modulus as i64;
        let mut c = -self.c[j];
        let mut b = -self.b[j];
        for (k, &e) in i.exps().iter().enumerate() {
            c += self.c[k] * e as i64;
            b += self.b[k] * e as i64;
        }
        (c.rem_euclid(q), b)
    }

    pub fn rotates(&self) -> bool {
        self.b.iter().any(|&b| b != 0)
    }
}

impl EigenSpec {
    pub fn exact(values: Vec<ExactComplex>) -> Result<Self> {
        let s = EigenSpec::Exact(values);
        s.validate()?;
        Ok(s)
    }

    pub fn symbolic(torsion_order: u64, a: Vec<i64>, b: Vec<i64>, theta: Option<Theta>) -> Result<Self> {
        let s = EigenSpec::Symbolic { torsion_order, a, b, theta };
        s.validate()?;
        Ok(s)
    }

    /// The exact spectrum of a diagonal matrix.
    pub fn from_diagonal(a: &Matrix<ExactComplex>) -> Result<Self> {
        if !a.is_diagonal() {
            return Err(Error::SpectrumUnsupported("linear part is not diagonal".into()));
        }
        Self::exact(a.diag())
    }

    fn validate(&self) -> Result<()> {
        match self {
            EigenSpec::Exact(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidArgument("spectrum needs at least one eigenvalue".into()));
                }
                if v.iter().any(Ring::is_zero) {
                    return Err(Error::InvalidArgument("eigenvalues must be nonzero".into()));
                }
            }
            EigenSpec::Symbolic { torsion_order, a, b, theta } => {
                if *torsion_order == 0 {
                    return Err(Error::InvalidArgument("torsion order must be at least 1".into()));
                }
                if a.is_empty() || a.len() != b.len() {
                    return Err(Error::InvalidArgument(format!(
                        "exponent lists a and b must be nonempty and equally long (got {} and {})",
                        a.len(),
                        b.len()
                    )));
                }
                if theta.is_none() && b.iter().any(|&x| x != 0) {
                    return Err(Error::InvalidArgument("nonzero b exponents need a rotation number theta".into()));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match self {
            EigenSpec::Exact(v) => v.len(),
            EigenSpec::Symbolic { a, .. } => a.len(),
        }
    }

    /// Folded form of a symbolic spec; `None` for exact specs.
    pub fn folded(&self) -> Option<Folded> {
        let EigenSpec::Symbolic { torsion_order, a, b, theta } = self else {
            return None;
        };
        let qe = *torsion_order;
        match theta {
            Some(Theta::Rational(r)) => {
                let p = r.numer();
                let q = r.denom();
                let big_q = BigInt::from(qe).lcm(q);
                let modulus = big_q.to_u64().expect("folded torsion order fits in 64 bits");
                let c = a
                    .iter()
                    .zip(b)
                    .map(|(&ak, &bk)| {
                        let v = BigInt::from(ak) * (&big_q / qe) + BigInt::from(bk) * p * (&big_q / q);
                        v.mod_floor(&big_q).to_i64().expect("residue fits")
                    })
                    .collect();
                Some(Folded { modulus, c, b: vec![0; a.len()], theta: None })
            }
            _ => Some(Folded {
                modulus: qe,
                c: a.iter().map(|&x| x.rem_euclid(qe as i64)).collect(),
                b: if theta.is_some() { b.clone() } else { vec![0; a.len()] },
                theta: theta.clone(),
            }),
        }
    }

    /// Spec of `{λ_k^q}`.
    pub fn power(&self, q: u64) -> Self {
        match self {
            EigenSpec::Exact(v) => EigenSpec::Exact(v.iter().map(|x| pow(x, q)).collect()),
            EigenSpec::Symbolic { torsion_order, a, b, theta } => EigenSpec::Symbolic {
                torsion_order: *torsion_order,
                a: a.iter().map(|&x| (x * q as i64).rem_euclid(*torsion_order as i64)).collect(),
                b: b.iter().map(|&x| x * q as i64).collect(),
                theta: theta.clone(),
            },
        }
    }

    /// Eigenvalue `k` (0-based) at `bits` of precision.
    pub fn eigenvalue(&self, k: usize, bits: usize) -> crate::rings::BigComplex {
        use crate::rings::BigComplex;
        match self {
            EigenSpec::Exact(v) => BigComplex::from_exact(&v[k], bits),
            EigenSpec::Symbolic { .. } => {
                let f = self.folded().expect("symbolic");
                BigComplex::unit(&folded_phase(&f, f.c[k], f.b[k], bits), bits)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EigenSpec::Exact(v) => json!({ "kind": "exact", "values": v.iter().map(ScalarCodec::to_json).collect::<Vec<_>>() }),
            EigenSpec::Symbolic { torsion_order, a, b, theta } => {
                let mut o = json!({ "kind": "symbolic", "torsion_order": torsion_order, "a": a, "b": b });
                if let Some(t) = theta {
                    o["theta"] = t.to_json();
                }
                o
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::parse("kind", "expected \"exact\" or \"symbolic\""))?;
        let ints = |name: &str| -> Result<Vec<i64>> {
            v.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(name, "expected an array of integers"))?
                .iter()
                .enumerate()
                .map(|(k, x)| x.as_i64().ok_or_else(|| Error::parse(format!("{name}[{k}]"), "expected an integer")))
                .collect()
        };
        let spec = match kind {
            "exact" => {
                let values = v
                    .get("values")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse("values", "expected an array of scalars"))?
                    .iter()
                    .enumerate()
                    .map(|(k, x)| ExactComplex::from_json(x, RingTag::Exact, &format!("values[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                EigenSpec::Exact(values)
            }
            "symbolic" => {
                let torsion_order = v
                    .get("torsion_order")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse("torsion_order", "expected a positive integer"))?;
                let a = ints("a")?;
                let b = match v.get("b") {
                    None => vec![0; a.len()],
                    Some(_) => ints("b")?,
                };
                let theta = match v.get("theta") {
                    None | Some(Value::Null) => None,
                    Some(t) => Some(Theta::from_json(t, "theta")?),
                };
                EigenSpec::Symbolic { torsion_order, a, b, theta }
            }
            other => return Err(Error::parse("kind", format!("unknown kind {other:?}"))),
        };
        spec.validate().map_err(|e| match e {
            Error::InvalidArgument(m) => Error::parse("$", m),
            e => e,
        })?;
        Ok(spec)
    }
}

/// `c / Q + b·θ` as a real number.
pub(crate) fn folded_phase(f: &Folded, c: i64, b: i64, bits: usize) -> BigFloat {
    let w = bits + 32;
    let tors = real::from_rational(&BigRational::new(c.into(), (f.modulus as i64).into()), w);
    match (&f.theta, b) {
        (Some(t), b) if b != 0 => real::add(&tors, &real::mul(&real::from_i64(b, w), &t.value(w), w), bits),
        _ => {
            let mut x = tors;
            x.set_precision(real::w(bits), real::RM).expect("precision change");
            x
        }
    }
}

/// Order of `x` as a root of unity, if it is one of `±1, ±i`.
fn gaussian_root_order(x: &ExactComplex) -> Option<u64> {
    let one = ExactComplex::one();
    [1u64, 2, 4].into_iter().find(|&k| pow(x, k) == one)
}

/// `(l(A), q(A))`.
pub fn multiplicative_invariants(spec: &EigenSpec) -> Result<(u32, u64)> {
    match spec {
        EigenSpec::Exact(v) => {
            let mut q = 1u64;
            for x in v {
                q = q.lcm(&gaussian_root_order(x).ok_or(Error::UnclassifiableSpectrum)?);
            }
            Ok((0, q))
        }
        EigenSpec::Symbolic { torsion_order, a, .. } => {
            let f = spec.folded().expect("symbolic");
            if f.rotates() {
                let g = a.iter().fold(*torsion_order, |g, &x| g.gcd(&(x.unsigned_abs() % torsion_order)));
                Ok((1, torsion_order / g))
            } else {
                let g = f.c.iter().fold(f.modulus, |g, &x| g.gcd(&(x as u64)));
                Ok((0, f.modulus / g))
            }
        }
    }
}

/// Resonant pairs `(i, j)` with `2 ≤ |i| ≤ m`, `j` 0-based, sorted by `(|i|, rank, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceSet {
    pub m: usize,
    pub pairs: Vec<(MultiIndex, usize)>,
}

impl ResonanceSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: &MultiIndex, j: usize) -> bool {
        self.pairs.iter().any(|(k, l)| k == i && *l == j)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.m,
            "count": self.pairs.len(),
            "pairs": self.pairs.iter().map(|(i, j)| json!({ "exponents": i.exps(), "coordinate": j + 1 })).collect::<Vec<_>>(),
        })
    }
}

/// Whether `λ^i = λ_j` (`j` 0-based).
pub fn is_resonant_pair(spec: &EigenSpec, i: &MultiIndex, j: usize) -> bool {
    match spec {
        EigenSpec::Exact(v) => {
            let mut p = ExactComplex::one();
            for (x, &e) in v.iter().zip(i.exps()) {
                if e > 0 {
                    p = p * &pow(x, e as u64);
                }
            }
            p == v[j]
        }
        EigenSpec::Symbolic { .. } => {
            let f = spec.folded().expect("symbolic");
            f.exponents(i, j) == (0, 0)
        }
    }
}

pub fn resonances(spec: &EigenSpec, m: usize) -> Result<ResonanceSet> {
    if m < 2 {
        return Err(Error::InvalidArgument("resonances need order m >= 2".into()));
    }
    let n = spec.n();
    let space = JetSpace::get(n, m);
    let mut pairs = Vec::new();
    match spec {
        EigenSpec::Exact(v) => {
            // λ^i built incrementally along the storage order.
            let mut values: Vec<ExactComplex> = Vec::with_capacity(space.len());
            values.push(ExactComplex::one());
            for idx in 1..space.len() {
                let e = space.monomial(idx);
                let k = e.exps().iter().position(|&x| x > 0).expect("non-constant");
                let mut p = e.exps().to_vec();
                p[k] -= 1;
                let parent = space.index_of(&MultiIndex::new(p)).expect("parent");
                let val = values[parent].clone() * &v[k];
                if e.degree() >= 2 {
                    for (j, l) in v.iter().enumerate() {
                        if val == *l {
                            pairs.push((e.clone(), j));
                        }
                    }
                }
                values.push(val);
            }
        }
        EigenSpec::Symbolic { .. } => {
            let f = spec.folded().expect("symbolic");
            for d in 2..=m {
                for idx in space.degree_range(d) {
                    let e = space.monomial(idx);
                    for j in 0..n {
                        if f.exponents(e, j) == (0, 0) {
                            pairs.push((e.clone(), j));
                        }
                    }
                }
            }
        }
    }
    Ok(ResonanceSet { m, pairs })
}
