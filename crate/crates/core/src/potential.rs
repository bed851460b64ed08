//! Green functions of disks and segments, Bernstein–Walsh checks and the
//! transfer from sampled coefficient growth to a radius of convergence.
//!
//! Sup-norms over a compact are estimated on its boundary. For a polynomial of
//! degree `n` the boundary is sampled at [`boundary_samples`]`(n)` points, which
//! keeps the estimate within a factor `1 + 2^{-10}` of the true sup-norm.

use std::cmp::Ordering;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jet::{GermJet, MultiIndex, ScalarJet};
use crate::linearizer::family_linearize;
use crate::rings::real::{self, BigFloat};
use crate::rings::serial::{RingTag, ScalarCodec};
use crate::rings::{BigComplex, ExactComplex, ParamPoly, Ring};

/// Relative slack applied to sampled sup-norms.
pub fn sampling_slack(bits: usize) -> BigFloat {
    real::add(&real::from_i64(1, bits), &real::pow2(-10, bits), bits)
}

/// Relative rounding tolerance `2^{6−bits}`.
pub fn tolerance(bits: usize) -> BigFloat {
    real::pow2(6 - bits as i64, bits)
}

/// Boundary points used for a degree-`n` sup-norm: `max(2^10, 128n)`.
///
/// On a circle `|P(e^{ix})| ≥ S·cos(n·|x − x₀|)` near a maximum `x₀`, so a mesh
/// of spacing `2π/N` loses at most a factor `cos(πn/N) ≥ 1/(1 + 2^{-10})`.
pub fn boundary_samples(n: usize) -> usize {
    (128 * n).max(1 << 10)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompactSet {
    Disk { center: ExactComplex, radius: BigRational },
    Segment { a: ExactComplex, b: ExactComplex },
}

impl CompactSet {
    pub fn disk(center: ExactComplex, radius: BigRational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidArgument("disk radius must be positive".into()));
        }
        Ok(CompactSet::Disk { center, radius })
    }

    pub fn segment(a: ExactComplex, b: ExactComplex) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument("segment endpoints coincide".into()));
        }
        Ok(CompactSet::Segment { a, b })
    }

    pub fn unit_disk() -> Self {
        CompactSet::Disk { center: ExactComplex::zero(), radius: BigRational::from_integer(1.into()) }
    }

    /// Disk `|z − c| ≤ r` or segment `[a, b]`.
    pub fn center(&self) -> ExactComplex {
        match self {
            CompactSet::Disk { center, .. } => center.clone(),
            CompactSet::Segment { a, b } => (a.clone() + b) * &ExactComplex::from_ratio(1, 2),
        }
    }

    /// Radius, or half the length of a segment.
    pub fn scale(&self, bits: usize) -> BigFloat {
        match self {
            CompactSet::Disk { radius, .. } => real::from_rational(radius, bits),
            CompactSet::Segment { a, b } => {
                let half = (b.clone() - a).norm_sqr() / BigRational::from_integer(4.into());
                real::sqrt(&real::from_rational(&half, bits + 16), bits)
            }
        }
    }

    pub fn contains(&self, z: &ExactComplex) -> bool {
        match self {
            CompactSet::Disk { center, radius } => (z.clone() - center).norm_sqr() <= radius * radius,
            CompactSet::Segment { a, b } => {
                // z = a + s(b − a) with real s ∈ [0, 1]
                let d = b.clone() - a;
                let s = (z.clone() - a) * &d.conj();
                let len = d.norm_sqr();
                s.im.is_zero() && !s.re.is_negative() && s.re <= len
            }
        }
    }

    /// `count` points on the boundary; for a segment, Chebyshev-spaced points on the segment itself.
    pub fn boundary(&self, count: usize, bits: usize) -> Vec<BigComplex> {
        let w = bits + 16;
        match self {
            CompactSet::Disk { center, radius } => {
                let c = BigComplex::from_exact(center, w);
                let r = real::from_rational(radius, w);
                (0..count)
                    .map(|k| {
                        let phi = real::from_rational(&BigRational::new(k.into(), count.into()), w);
                        (c.clone() + &BigComplex::unit(&phi, w).scale(&r)).with_precision(bits)
                    })
                    .collect()
            }
            CompactSet::Segment { a, b } => {
                let a = BigComplex::from_exact(a, w);
                let d = BigComplex::from_exact(b, w) - &a;
                let pi = real::pi(w);
                let half = real::from_rational(&BigRational::new(1.into(), 2.into()), w);
                (0..=count)
                    .map(|k| {
                        let x = real::div(&real::mul(&pi, &real::from_i64(k as i64, w), w), &real::from_i64(count as i64, w), w);
                        let s = real::mul(&half, &real::sub(&real::from_i64(1, w), &real::cos(&x, w), w), w);
                        (a.clone() + &d.scale(&s)).with_precision(bits)
                    })
                    .collect()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CompactSet::Disk { center, radius } => json!({
                "kind": "disk",
                "center": center.to_json(),
                "radius": ExactComplex::from_real(radius.clone()).to_json()["re"],
            }),
            CompactSet::Segment { a, b } => json!({ "kind": "segment", "a": a.to_json(), "b": b.to_json() }),
        }
    }

    pub fn from_json(v: &Value, at: &str) -> Result<Self> {
        let scalar = |name: &str| -> Result<ExactComplex> {
            let x = v.get(name).ok_or_else(|| Error::parse(format!("{at}.{name}"), "missing field"))?;
            ExactComplex::from_json(x, RingTag::Exact, &format!("{at}.{name}"))
        };
        match v.get("kind").and_then(Value::as_str) {
            Some("disk") => {
                let r = scalar("radius")?;
                if !r.im.is_zero() {
                    return Err(Error::parse(format!("{at}.radius"), "radius must be real"));
                }
                CompactSet::disk(scalar("center")?, r.re)
            }
            Some("segment") => CompactSet::segment(scalar("a")?, scalar("b")?),
            _ => Err(Error::parse(format!("{at}.kind"), "expected \"disk\" or \"segment\"")),
        }
    }
}

/// `disk:c,r` or `segment:a,b`, with complex values written as `a+bi`.
impl FromStr for CompactSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("set", format!("expected disk:c,r or segment:a,b, got {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (x, y) = rest.split_once(',').ok_or_else(bad)?;
        let x: ExactComplex = x.parse()?;
        let y: ExactComplex = y.parse()?;
        match kind.trim() {
            "disk" => {
                if !y.im.is_zero() {
                    return Err(Error::parse("set", "disk radius must be real"));
                }
                CompactSet::disk(x, y.re)
            }
            "segment" => CompactSet::segment(x, y),
            _ => Err(bad()),
        }
    }
}

/// Green function of the complement with pole at infinity.
pub fn green(set: &CompactSet, z: &BigComplex, bits: usize) -> BigFloat {
    let w = bits + 16;
    let z = z.with_precision(w);
    let g = match set {
        CompactSet::Disk { center, radius } => {
            let d = (z - &BigComplex::from_exact(center, w)).abs();
            if d.is_zero() {
                return real::zero(bits);
            }
            real::ln(&real::div(&d, &real::from_rational(radius, w), w), w)
        }
        CompactSet::Segment { a, b } => {
            // affine map onto [−1, 1], then the Joukowski inverse of modulus ≥ 1
            let a = BigComplex::from_exact(a, w);
            let b = BigComplex::from_exact(b, w);
            let two = BigComplex::from_i64(2).with_precision(w);
            let u = (two * &z - &a - &b) * &(b - &a).try_inv().expect("a != b");
            let s = (u.clone() * &u - &BigComplex::one().with_precision(w)).sqrt();
            let p = (u.clone() + &s).abs();
            let q = (u - &s).abs();
            real::ln(&real::max(p, q), w)
        }
    };
    let mut g = real::max(real::zero(w), g);
    g.set_precision(real::w(bits), real::RM).expect("precision change");
    g
}

/// Horner evaluation of `Σ c_k z^k`.
pub fn eval_poly(coeffs: &[ExactComplex], z: &BigComplex, bits: usize) -> BigComplex {
    let z = z.with_precision(bits);
    coeffs.iter().rev().fold(BigComplex::zero_with(bits), |acc, c| acc * &z + &BigComplex::from_exact(c, bits))
}

fn poly_degree(coeffs: &[ExactComplex]) -> usize {
    coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Sampled sup-norm of a polynomial over `set`.
pub fn sup_norm(coeffs: &[ExactComplex], set: &CompactSet, bits: usize) -> BigFloat {
    let w = bits + 16;
    set.boundary(boundary_samples(poly_degree(coeffs)), w)
        .iter()
        .map(|z| eval_poly(coeffs, z, w).abs())
        .fold(real::zero(bits), real::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinReport {
    pub degree: usize,
    pub boundary_samples: usize,
    pub sup_norm: BigFloat,
    pub points: usize,
    /// `max |P(z)| / (||P|| e^{n g(z)})`; `None` when `P = 0`.
    pub max_ratio: Option<BigFloat>,
    /// Indices of points where `|P(z)|` exceeds the slackened bound.
    pub violations: Vec<usize>,
    pub bits: usize,
}

impl BernsteinReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "boundary_samples": self.boundary_samples,
            "sup_norm": real::format_decimal(&self.sup_norm),
            "points": self.points,
            "max_ratio": self.max_ratio.as_ref().map(real::format_decimal),
            "violations": self.violations,
            "passed": self.passed(),
            "bits": self.bits,
        })
    }
}

/// Checks `|P(z)| ≤ ||P||_K e^{n g(z)}` at every point.
///
/// A point fails when `|P(z)|` exceeds the bound times `(1 + 2^{-10})(1 + 2^{6−bits})`.
pub fn bernstein_check(coeffs: &[ExactComplex], set: &CompactSet, points: &[BigComplex], bits: usize) -> BernsteinReport {
    let w = bits + 16;
    let n = poly_degree(coeffs);
    let sup = sup_norm(coeffs, set, w);
    let slack = real::mul(&sampling_slack(w), &real::add(&real::from_i64(1, w), &tolerance(bits), w), w);
    let nn = real::from_i64(n as i64, w);
    let mut max_ratio: Option<BigFloat> = None;
    let mut violations = Vec::new();
    for (k, z) in points.iter().enumerate() {
        let v = eval_poly(coeffs, z, w).abs();
        let bound = real::mul(&sup, &real::exp(&real::mul(&nn, &green(set, z, w), w), w), w);
        if bound.is_zero() {
            continue;
        }
        let ratio = real::div(&v, &bound, w);
        if real::cmp(&ratio, &slack) == Ordering::Greater {
            violations.push(k);
        }
        max_ratio = Some(match max_ratio {
            None => ratio,
            Some(r) => real::max(r, ratio),
        });
    }
    let round = |mut x: BigFloat| {
        x.set_precision(real::w(bits), real::RM).expect("precision change");
        x
    };
    BernsteinReport {
        degree: n,
        boundary_samples: boundary_samples(n),
        sup_norm: round(sup),
        points: points.len(),
        max_ratio: max_ratio.map(round),
        violations,
        bits,
    }
}

/// `count` seeded points, uniform in the disk of radius `spread·scale` around the set's center.
pub fn random_points(set: &CompactSet, count: usize, spread: f64, seed: u64, bits: usize) -> Vec<BigComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = BigComplex::from_exact(&set.center(), bits);
    let r = real::mul(&set.scale(bits), &f64_to_big(spread, bits), bits);
    (0..count)
        .map(|_| {
            let rho: f64 = rng.gen::<f64>().sqrt();
            let phi: f64 = rng.gen();
            let u = BigComplex::unit(&f64_to_big(phi, bits), bits).scale(&real::mul(&r, &f64_to_big(rho, bits), bits));
            c.clone() + &u
        })
        .collect()
}

fn f64_to_big(x: f64, bits: usize) -> BigFloat {
    real::from_rational(&BigRational::from_float(x).expect("finite"), bits)
}

/// `e^{ln(x)/k}`, with `0 ↦ 0`.
fn root(x: &BigFloat, k: usize, bits: usize) -> BigFloat {
    if x.is_zero() {
        return real::zero(bits);
    }
    real::exp(&real::div(&real::ln(x, bits), &real::from_i64(k as i64, bits), bits), bits)
}

/// `||h_i||_{C} ≤ rho1^{|i|}` for every sampled `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCertificate {
    pub c_set: CompactSet,
    pub k_set: CompactSet,
    /// Parameter-degree factor, taken to be the family's `d0`.
    pub d: usize,
    pub rho1: BigFloat,
    /// `(|i|, sampled sup-norm)` pairs.
    pub norms: Vec<(usize, BigFloat)>,
}

impl GrowthCertificate {
    pub fn new(c_set: CompactSet, k_set: CompactSet, d: usize, norms: Vec<(usize, BigFloat)>, bits: usize) -> Result<Self> {
        if norms.iter().any(|(deg, _)| *deg == 0) {
            return Err(Error::InvalidArgument("certificate degrees must be positive".into()));
        }
        let rho1 = norms.iter().map(|(deg, x)| root(x, *deg, bits + 16)).fold(real::zero(bits), real::max);
        // round up so the invariant survives the precision change
        let rho1 = real::mul(&rho1, &real::add(&real::from_i64(1, bits), &real::pow2(4 - bits as i64, bits), bits), bits);
        Ok(Self { c_set, k_set, d, rho1, norms })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c_set": self.c_set.to_json(),
            "k_set": self.k_set.to_json(),
            "d": self.d,
            "rho1": real::format_hex(&self.rho1),
            "norms": self.norms.iter().map(|(deg, x)| json!({ "degree": deg, "norm": real::format_hex(x) })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, bits: usize) -> Result<Self> {
        let c_set = CompactSet::from_json(v.get("c_set").unwrap_or(&Value::Null), "c_set")?;
        let k_set = CompactSet::from_json(v.get("k_set").unwrap_or(&Value::Null), "k_set")?;
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| Error::parse("d", "expected a nonnegative integer"))? as usize;
        let num = |x: Option<&Value>, at: String| -> Result<BigFloat> {
            let s = x.and_then(Value::as_str).ok_or_else(|| Error::parse(at.clone(), "expected a number string"))?;
            let x = real::parse_any(s, bits)?;
            if x.is_negative() {
                return Err(Error::parse(at, "must be nonnegative"));
            }
            Ok(x)
        };
        let rho1 = num(v.get("rho1"), "rho1".into())?;
        let mut norms = Vec::new();
        for (k, e) in v.get("norms").and_then(Value::as_array).into_iter().flatten().enumerate() {
            let deg = e.get("degree").and_then(Value::as_u64).filter(|&x| x > 0).ok_or_else(|| Error::parse(format!("norms[{k}].degree"), "expected a positive integer"))?;
            norms.push((deg as usize, num(e.get("norm"), format!("norms[{k}].norm"))?));
        }
        let tol = real::add(&real::from_i64(1, bits), &real::pow2(4 - bits as i64, bits), bits);
        for (k, (deg, x)) in norms.iter().enumerate() {
            let bound = real::mul(&real::exp(&real::mul(&real::from_i64(*deg as i64, bits), &real::ln(&rho1, bits), bits), bits), &tol, bits);
            if !x.is_zero() && (rho1.is_zero() || real::cmp(x, &bound) == Ordering::Greater) {
                return Err(Error::InvariantViolation(format!("norms[{k}] exceeds rho1^{deg}")));
            }
        }
        Ok(Self { c_set, k_set, d, rho1, norms })
    }
}

/// `C(K) = exp(sup_K g_C)`, in closed form for two disks and sampled on `∂K` otherwise.
pub fn growth_constant(c_set: &CompactSet, k_set: &CompactSet, bits: usize) -> BigFloat {
    let w = bits + 16;
    let sup = match (c_set, k_set) {
        (CompactSet::Disk { center: c, radius: r }, CompactSet::Disk { center: ck, radius: rk }) => {
            let dist = real::sqrt(&real::from_rational(&(ck.clone() - c).norm_sqr(), w), w);
            let far = real::add(&dist, &real::from_rational(rk, w), w);
            real::max(real::zero(w), real::ln(&real::div(&far, &real::from_rational(r, w), w), w))
        }
        _ => {
            let s = k_set.boundary(boundary_samples(1), w).iter().map(|z| green(c_set, z, w)).fold(real::zero(w), real::max);
            real::add(&s, &real::ln(&sampling_slack(w), w), w)
        }
    };
    let mut c = real::exp(&sup, w);
    c.set_precision(real::w(bits), real::RM).expect("precision change");
    c
}

/// `1/(C(K)^d · rho1)`; `None` stands for an infinite radius.
pub fn radius_lower_bound(cert: &GrowthCertificate, t: &ExactComplex, bits: usize) -> Result<Option<BigFloat>> {
    if cert.norms.is_empty() {
        return Err(Error::EmptyCertificate);
    }
    if !cert.k_set.contains(t) {
        return Err(Error::InvalidArgument(format!("t = {t} lies outside the evaluation compact")));
    }
    if cert.rho1.is_zero() {
        return Ok(None);
    }
    let w = bits + 16;
    let c = growth_constant(&cert.c_set, &cert.k_set, w);
    let mut denom = cert.rho1.clone();
    for _ in 0..cert.d {
        denom = real::mul(&denom, &c, w);
    }
    let mut r = real::div(&real::from_i64(1, w), &denom, w);
    r.set_precision(real::w(bits), real::RM).expect("precision change");
    Ok(Some(r))
}

/// One monomial of the growth experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub exponents: Vec<u32>,
    pub norm_c: BigFloat,
    /// Sampled norm on `K` times the sampling slack, an upper bound for the true norm.
    pub norm_k: BigFloat,
    /// `C(K)^{d|i|} rho1^{|i|}`.
    pub bound: BigFloat,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthExperiment {
    pub certificate: GrowthCertificate,
    pub growth_constant: BigFloat,
    pub rows: Vec<GrowthRow>,
}

impl GrowthExperiment {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "certificate": self.certificate.to_json(),
            "growth_constant": real::format_decimal(&self.growth_constant),
            "rows": self.rows.iter().map(|r| json!({
                "exponents": r.exponents,
                "norm_c": real::format_decimal(&r.norm_c),
                "norm_k": real::format_decimal(&r.norm_k),
                "bound": real::format_decimal(&r.bound),
                "ok": r.ok,
            })).collect::<Vec<_>>(),
            "violations": self.violations(),
        })
    }
}

fn param_sup(p: &ParamPoly<ExactComplex>, set: &CompactSet, bits: usize) -> BigFloat {
    sup_norm(p.coeffs(), set, bits)
}

/// Linearizes the family `f_t` to order `m`, certifies coefficient growth on
/// `c_set` and compares the exact coefficients on `k_set` with the transferred bound.
pub fn growth_experiment(
    f: &GermJet<ParamPoly<ExactComplex>>,
    m: usize,
    c_set: &CompactSet,
    k_set: &CompactSet,
    bits: usize,
) -> Result<GrowthExperiment> {
    let fam = if f.order() < m { family_linearize(&f.lift(m), m)? } else { family_linearize(f, m)? };
    let h = &fam.h_t;
    let space = h.components()[0].space();
    let w = bits + 16;
    let mut entries = Vec::new();
    for idx in space.degree_range(2).start..space.len() {
        let i = space.monomial(idx);
        let coeffs: Vec<&ParamPoly<ExactComplex>> = h.components().iter().map(|c| &c.coeffs()[idx]).collect();
        if coeffs.iter().all(|p| p.is_zero()) {
            continue;
        }
        let on = |set: &CompactSet| coeffs.iter().map(|p| param_sup(p, set, w)).fold(real::zero(w), real::max);
        entries.push((i.clone(), on(c_set), on(k_set)));
    }
    let norms: Vec<(usize, BigFloat)> = entries.iter().map(|(i, c, _)| (i.degree(), c.clone())).collect();
    let certificate = GrowthCertificate::new(c_set.clone(), k_set.clone(), fam.d0, norms, w)?;
    let growth = growth_constant(c_set, k_set, w);
    let slack = sampling_slack(w);
    let tol = real::add(&real::from_i64(1, w), &tolerance(bits), w);
    let base = real::mul(&certificate.rho1, &(0..fam.d0).fold(real::from_i64(1, w), |acc, _| real::mul(&acc, &growth, w)), w);
    let rows = entries
        .into_iter()
        .map(|(i, norm_c, norm_k)| {
            let bound = (0..i.degree()).fold(real::from_i64(1, w), |acc, _| real::mul(&acc, &base, w));
            let norm_k = real::mul(&norm_k, &slack, w);
            let ok = real::cmp(&norm_k, &real::mul(&bound, &tol, w)) != Ordering::Greater;
            GrowthRow { exponents: i.exps().to_vec(), norm_c, norm_k, bound, ok }
        })
        .collect();
    Ok(GrowthExperiment { certificate, growth_constant: growth, rows })
}

/// The one-dimensional family `λz + tz²`.
pub fn quadratic_family(lambda: i64) -> GermJet<ParamPoly<ExactComplex>> {
    let terms = [
        (MultiIndex::new(vec![1]), ParamPoly::constant(ExactComplex::from_i64(lambda))),
        (MultiIndex::new(vec![2]), ParamPoly::t()),
    ];
    GermJet::new(vec![ScalarJet::from_terms(1, 2, terms).expect("valid jet")]).expect("valid germ")
}
