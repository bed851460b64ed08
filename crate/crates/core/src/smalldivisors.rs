//! Small divisors `|λ^i − λ_j|`, scalar rotation divisors and Bruno sums.
//!
//! For a symbolic spectrum every divisor is a chord `|e^{2πiφ} − 1|` with
//! `φ = (Σc_k i_k − c_j)/Q + (Σb_k i_k − b_j)θ`, so it only depends on the two
//! integers `(Σc_k i_k − c_j mod Q, Σb_k i_k − b_j)`. Exact spectra are
//! compared through exact squared moduli and rounded once at the end.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jet::{JetSpace, MultiIndex};
use crate::rings::real::{self, BigFloat};
use crate::rings::{pow, ExactComplex, Ring};
use crate::spectrum::{folded_phase, is_resonant_pair, EigenSpec, Theta};

/// Tolerance attached to comparisons at `bits` of precision: `2^{4−bits}`.
pub fn tolerance(bits: usize) -> BigFloat {
    real::pow2(4 - bits as i64, bits)
}

/// `Ω(m)`: smallest non-resonant divisor over `2 ≤ |i| ≤ m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaEntry {
    pub m: usize,
    /// `None` when every pair up to `m` is an exact resonance.
    pub value: Option<BigFloat>,
    /// A pair (monomial, 0-based coordinate) attaining the minimum.
    pub argmin: Option<(MultiIndex, usize)>,
    /// Whether some pair up to `m` is an exact resonance (zero divisor, excluded).
    pub resonant: bool,
}

impl OmegaEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.m,
            "omega": self.value.as_ref().map(real::format_decimal),
            "omega_hex": self.value.as_ref().map(real::format_hex),
            "argmin": self.argmin.as_ref().map(|(i, j)| json!({ "exponents": i.exps(), "coordinate": j + 1 })),
            "exact_resonance": self.resonant,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallDivisorProfile {
    pub spec: EigenSpec,
    pub bits: usize,
    /// Entries for `m = 2, 3, …`.
    pub table: Vec<OmegaEntry>,
}

impl SmallDivisorProfile {
    pub fn entry(&self, m: usize) -> Option<&OmegaEntry> {
        m.checked_sub(2).and_then(|k| self.table.get(k))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec.to_json(),
            "bits": self.bits,
            "table": self.table.iter().map(OmegaEntry::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Minimum over one homogeneous degree.
struct DegreeMin {
    value: Option<BigFloat>,
    argmin: Option<(MultiIndex, usize)>,
    resonant: bool,
}

fn degree_minimum(spec: &EigenSpec, d: usize, bits: usize, cache: &mut HashMap<(i64, i64), BigFloat>) -> Result<DegreeMin> {
    let n = spec.n();
    let space = JetSpace::get(n, d);
    let tol = tolerance(bits);
    let mut best = DegreeMin { value: None, argmin: None, resonant: false };
    let consider = |best: &mut DegreeMin, v: BigFloat, i: &MultiIndex, j: usize| {
        if best.value.as_ref().is_none_or(|b| real::cmp(&v, b) == Ordering::Less) {
            best.value = Some(v);
            best.argmin = Some((i.clone(), j));
        }
    };
    match spec {
        EigenSpec::Symbolic { .. } => {
            let f = spec.folded().expect("symbolic");
            for idx in space.degree_range(d) {
                let i = space.monomial(idx);
                for j in 0..n {
                    let (c, b) = f.exponents(i, j);
                    if (c, b) == (0, 0) {
                        best.resonant = true;
                        continue;
                    }
                    let v = cache
                        .entry((c, b))
                        .or_insert_with(|| real::chord(&folded_phase(&f, c, b, bits + 32), bits))
                        .clone();
                    if real::cmp(&v, &tol) != Ordering::Greater {
                        return Err(Error::PrecisionTooLow { bits });
                    }
                    consider(&mut best, v, i, j);
                }
            }
        }
        EigenSpec::Exact(values) => {
            let mut best_sq: Option<BigRational> = None;
            for idx in space.degree_range(d) {
                let i = space.monomial(idx);
                let mut p = ExactComplex::one();
                for (x, &e) in values.iter().zip(i.exps()) {
                    if e > 0 {
                        p = p * &pow(x, e as u64);
                    }
                }
                for (j, l) in values.iter().enumerate() {
                    let sq = (p.clone() - l).norm_sqr();
                    if sq.is_zero() {
                        best.resonant = true;
                        continue;
                    }
                    if best_sq.as_ref().is_none_or(|b| sq < *b) {
                        best_sq = Some(sq);
                        best.argmin = Some((i.clone(), j));
                    }
                }
            }
            best.value = best_sq.map(|sq| real::sqrt(&real::from_rational(&sq, bits + 32), bits));
        }
    }
    Ok(best)
}

/// `Ω(m)` for `m = 2..=m_max`, nonincreasing by construction.
pub fn profile(spec: &EigenSpec, m_max: usize, bits: usize) -> Result<SmallDivisorProfile> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("small divisors need order m >= 2".into()));
    }
    check_bits(bits)?;
    let mut cache = HashMap::new();
    let mut table: Vec<OmegaEntry> = Vec::with_capacity(m_max - 1);
    for d in 2..=m_max {
        let cur = degree_minimum(spec, d, bits, &mut cache)?;
        let prev = table.last();
        let mut entry = match prev {
            Some(p) => p.clone(),
            None => OmegaEntry { m: d, value: None, argmin: None, resonant: false },
        };
        entry.m = d;
        entry.resonant |= cur.resonant;
        if let Some(v) = cur.value {
            if entry.value.as_ref().is_none_or(|b| real::cmp(&v, b) == Ordering::Less) {
                entry.value = Some(v);
                entry.argmin = cur.argmin;
            }
        }
        table.push(entry);
    }
    Ok(SmallDivisorProfile { spec: spec.clone(), bits, table })
}

pub fn omega(spec: &EigenSpec, m: usize, bits: usize) -> Result<OmegaEntry> {
    Ok(profile(spec, m, bits)?.table.pop().expect("m >= 2"))
}

fn check_bits(bits: usize) -> Result<()> {
    if bits < crate::rings::MIN_PRECISION {
        return Err(Error::InvalidArgument(format!("precision {bits} below 53 bits")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarOmega {
    pub value: BigFloat,
    pub argmin: u64,
    /// Smallest `k ≤ M` with `kθ ∈ Z`, for rational `θ`.
    pub zero_at: Option<u64>,
}

/// `min_{1≤k≤M} |e^{2πikθ} − 1|`.
pub fn scalar_omega(theta: &Theta, big_m: u64, bits: usize) -> Result<ScalarOmega> {
    if big_m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    check_bits(bits)?;
    if let Theta::Rational(r) = theta {
        let q = r.denom();
        if *q <= BigInt::from(big_m) {
            let k: u64 = q.try_into().expect("denominator below M");
            return Ok(ScalarOmega { value: real::zero(bits), argmin: k, zero_at: Some(k) });
        }
    }
    let w = bits + 32;
    let t = theta.value(w);
    let tol = tolerance(bits);
    let mut best: Option<(BigFloat, u64)> = None;
    for k in 1..=big_m {
        let v = real::chord(&real::mul(&real::from_i64(k as i64, w), &t, w), bits);
        if real::cmp(&v, &tol) != Ordering::Greater {
            return Err(Error::PrecisionTooLow { bits });
        }
        if best.as_ref().is_none_or(|(b, _)| real::cmp(&v, b) == Ordering::Less) {
            best = Some((v, k));
        }
    }
    let (value, argmin) = best.expect("M >= 1");
    Ok(ScalarOmega { value, argmin, zero_at: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionComparison {
    pub q: u64,
    pub omega_q: OmegaEntry,
    pub omega_1: OmegaEntry,
    /// `omega_q ≤ q·omega_1 + tol`; vacuous when `omega_q` has no non-resonant pair.
    pub certified: bool,
    /// `omega_q / omega_1` when both exist.
    pub ratio: Option<f64>,
}

impl TorsionComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "omega_q": self.omega_q.to_json(),
            "omega_1": self.omega_1.to_json(),
            "certified": self.certified,
            "ratio": self.ratio,
        })
    }
}

pub fn torsion_compare(spec: &EigenSpec, q: u64, m: usize, bits: usize) -> Result<TorsionComparison> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let omega_1 = omega(spec, m, bits)?;
    let omega_q = if q == 1 { omega_1.clone() } else { omega(&spec.power(q), m, bits)? };
    let tol = tolerance(bits);
    let (certified, ratio) = match (&omega_q.value, &omega_1.value) {
        (None, _) => (true, None),
        (Some(_), None) => (false, None),
        (Some(a), Some(b)) => {
            let bound = real::add(&real::mul(&real::from_i64(q as i64, bits), b, bits), &tol, bits);
            (real::cmp(a, &bound) != Ordering::Greater, Some(real::to_f64(a) / real::to_f64(b)))
        }
    };
    Ok(TorsionComparison { q, omega_q, omega_1, certified, ratio })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseReduction {
    pub omega: OmegaEntry,
    /// `(m+1)·max|b_k|`.
    pub index_bound: u64,
    pub scalar: ScalarOmega,
    pub holds: bool,
}

impl BaseReduction {
    pub fn to_json(&self) -> Value {
        json!({
            "omega": self.omega.to_json(),
            "index_bound": self.index_bound,
            "scalar_omega": real::format_decimal(&self.scalar.value),
            "scalar_argmin": self.scalar.argmin,
            "holds": self.holds,
        })
    }
}

/// Checks `Ω_α(m) ≥ Ω_θ((m+1)·max|b_k|) − tol` on a torsion-free spectrum.
pub fn base_reduction_check(spec: &EigenSpec, m: usize, bits: usize) -> Result<BaseReduction> {
    let f = spec.folded().ok_or_else(|| Error::SpectrumUnsupported("base reduction needs a symbolic spectrum".into()))?;
    let theta = match (&f.theta, f.modulus) {
        (Some(t @ Theta::Irrational { .. }), 1) => t.clone(),
        _ => {
            return Err(Error::SpectrumUnsupported(
                "base reduction needs torsion order 1 and an irrational rotation number".into(),
            ))
        }
    };
    let bmax = f.b.iter().map(|b| b.unsigned_abs()).max().unwrap_or(0);
    let index_bound = (m as u64 + 1) * bmax.max(1);
    let omega = omega(spec, m, bits)?;
    let scalar = scalar_omega(&theta, index_bound, bits)?;
    let holds = match &omega.value {
        None => true,
        Some(v) => real::cmp(v, &real::sub(&scalar.value, &tolerance(bits), bits)) != Ordering::Less,
    };
    Ok(BaseReduction { omega, index_bound, scalar, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub enum BrunoVerdict {
    /// An increment `log q_{k+1}/q_k` fell below `epsilon` at index `k`.
    ConvergedAtCutoff { epsilon: f64, k: usize },
    /// The partial sum exceeded `bound` at index `k`.
    ExceededBound { bound: f64, k: usize },
    RationalTheta,
    /// Neither criterion met within the cutoff.
    Undecided { k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrunoReport {
    pub theta: Theta,
    pub bits: usize,
    /// `(p_k, q_k)` from `k = 0`, with `q_0 = 1`.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// `B_k = Σ_{l≤k} log(q_{l+1})/q_l`.
    pub partial_sums: Vec<BigFloat>,
    pub verdict: BrunoVerdict,
}

impl BrunoReport {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            BrunoVerdict::ConvergedAtCutoff { epsilon, k } => json!({ "kind": "ConvergedAtCutoff", "epsilon": epsilon, "k": k }),
            BrunoVerdict::ExceededBound { bound, k } => json!({ "kind": "ExceededBound", "bound": bound, "k": k }),
            BrunoVerdict::RationalTheta => json!({ "kind": "RationalTheta" }),
            BrunoVerdict::Undecided { k } => json!({ "kind": "Undecided", "k": k }),
        };
        json!({
            "theta": self.theta.to_json(),
            "bits": self.bits,
            "convergents": self.convergents.iter().map(|(p, q)| json!([p.to_string(), q.to_string()])).collect::<Vec<_>>(),
            "partial_sums": self.partial_sums.iter().map(real::format_decimal).collect::<Vec<_>>(),
            "verdict": verdict,
        })
    }
}

/// Tail threshold for [`BrunoVerdict::ConvergedAtCutoff`].
pub const BRUNO_EPSILON: f64 = 1.0 / 1_048_576.0;

/// Partial quotients of an exact rational in `(0, 1)`, from `a_1`.
fn partial_quotients(x: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = x.clone();
    loop {
        let frac = &x - BigRational::from_integer(x.to_integer());
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
        out.push(x.to_integer());
    }
    out
}

/// Continued-fraction Bruno sum `B = Σ log(q_{k+1})/q_k` up to index `cutoff`.
///
/// Irrational values are expanded on the exact interval `θ ± 2^{4−bits}`;
/// partial quotients are used only while both endpoints agree.
pub fn bruno_check(theta: &Theta, cutoff: usize, bound: f64, bits: usize) -> Result<BrunoReport> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    check_bits(bits)?;
    let (quotients, exhausted) = match theta {
        Theta::Rational(r) => {
            if !r.is_positive() || *r >= BigRational::one() {
                return Err(Error::InvalidArgument("theta must lie in (0, 1)".into()));
            }
            (partial_quotients(r), false)
        }
        Theta::Irrational { value, .. } => {
            let x = real::to_rational(value).ok_or_else(|| Error::InvalidArgument("theta is not finite".into()))?;
            if !x.is_positive() || x >= BigRational::one() {
                return Err(Error::InvalidArgument("theta must lie in (0, 1)".into()));
            }
            let delta = real::to_rational(&tolerance(bits)).expect("finite");
            let lo = partial_quotients(&(&x - &delta));
            let hi = partial_quotients(&(&x + &delta));
            let agree: Vec<BigInt> = lo.iter().zip(&hi).take_while(|(a, b)| a == b).map(|(a, _)| a.clone()).collect();
            (agree, true)
        }
    };

    let w = bits + 32;
    let mut convergents = vec![(BigInt::zero(), BigInt::one())];
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    for a in &quotients {
        let (p, q) = convergents.last().cloned().expect("nonempty");
        let next = (a * &p + &p_prev, a * &q + &q_prev);
        p_prev = p;
        q_prev = q;
        convergents.push(next);
    }

    let mut partial_sums: Vec<BigFloat> = Vec::new();
    let mut sum = real::zero(w);
    let bound_f = real::parse_decimal(&format!("{bound:e}"), w)?;
    let eps = real::pow2(-20, w);
    let mut verdict = None;
    for k in 0..=cutoff {
        if k + 1 >= convergents.len() {
            if !exhausted {
                verdict = Some(BrunoVerdict::RationalTheta);
                break;
            }
            return Err(Error::PrecisionExhausted { terms: quotients.len(), bits });
        }
        let qk = &convergents[k].1;
        let qn = &convergents[k + 1].1;
        let term = real::div(&real::ln(&real::from_bigint(qn, w), w), &real::from_bigint(qk, w), w);
        sum = real::add(&sum, &term, w);
        partial_sums.push(sum.clone());
        if real::cmp(&sum, &bound_f) == Ordering::Greater {
            verdict = Some(BrunoVerdict::ExceededBound { bound, k });
            break;
        }
        // log(q_1)/q_0 = log(a_1) says nothing about the tail.
        if k >= 1 && real::cmp(&term, &eps) == Ordering::Less {
            verdict = Some(BrunoVerdict::ConvergedAtCutoff { epsilon: BRUNO_EPSILON, k });
            break;
        }
    }
    if matches!(theta, Theta::Rational(_)) {
        verdict = Some(BrunoVerdict::RationalTheta);
    }
    let verdict = verdict.unwrap_or(BrunoVerdict::Undecided { k: cutoff });
    let used = partial_sums.len() + 1;
    convergents.truncate(used.max(1).min(convergents.len()));
    Ok(BrunoReport { theta: theta.clone(), bits, convergents, partial_sums, verdict })
}

/// `(√5 − 1)/2` at `bits` of precision.
pub fn golden_theta(bits: usize) -> Theta {
    let w = bits + 32;
    let five = real::from_i64(5, w);
    let mut v = real::div(&real::sub(&real::sqrt(&five, w), &real::from_i64(1, w), w), &real::from_i64(2, w), w);
    v.set_precision(real::w(bits), real::RM).expect("precision change");
    Theta::Irrational { value: v, bits }
}

/// `√2 − 1` at `bits` of precision.
pub fn silver_theta(bits: usize) -> Theta {
    let w = bits + 32;
    let mut v = real::sub(&real::sqrt(&real::from_i64(2, w), w), &real::from_i64(1, w), w);
    v.set_precision(real::w(bits), real::RM).expect("precision change");
    Theta::Irrational { value: v, bits }
}

/// `Σ_{k=1}^{terms} 10^{−k!}` rounded to `bits`, declared irrational.
pub fn liouville_theta(terms: u32, bits: usize) -> Theta {
    let mut x = BigRational::zero();
    let mut fact = 1u32;
    for k in 1..=terms {
        fact *= k;
        x += BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), fact as usize));
    }
    Theta::Irrational { value: real::from_rational(&x, bits), bits }
}

/// Whether `λ^i = λ_j` for the pair attaining a reported minimum; used as a sanity hook.
pub fn is_excluded_pair(spec: &EigenSpec, i: &MultiIndex, j: usize) -> bool {
    is_resonant_pair(spec, i, j)
}
