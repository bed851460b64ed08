//! Order-by-order linearization of germs.
//!
//! [`linearize`] solves `f∘h = h∘A`, i.e. `h⁻¹∘f∘h = A`. At degree `d` the
//! unknown part `H_d` of `h` satisfies `H_d∘A − A·H_d = [f∘h_{<d}]_d`, one
//! exact linear system per degree. [`family_linearize`] works with the
//! opposite orientation `h∘f = A∘h`, for which `(A·K_d − K_d∘A) = [h_{<d}∘f]_d`.

use serde_json::{json, Value};

use crate::centralizer::{centralizer_basis, homological_matrix, HomologicalMatrix};
use crate::error::{Error, Result};
use crate::io::germ_to_json;
use crate::jet::{GermJet, MultiIndex, ScalarJet};
use crate::linalg::{solve_exact, Matrix};
use crate::rings::serial::ScalarCodec;
use crate::rings::{ExactComplex, ExactScalar, ParamPoly, Ring};
use crate::spectrum::{multiplicative_invariants, EigenSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Linearized,
    Obstructed,
}

/// First right-hand side outside the image of the homological operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction<R> {
    pub degree: usize,
    pub monomial: MultiIndex,
    /// 0-based.
    pub coordinate: usize,
    pub value: R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationResult {
    pub status: Status,
    /// Solved through the last consistent degree; higher degrees are zero.
    pub h: GermJet<ExactComplex>,
    /// Unknowns left free by the per-degree systems, filled from `s`, as (monomial, 0-based coordinate).
    pub free_slots: Vec<(MultiIndex, usize)>,
    pub obstruction: Option<Obstruction<ExactComplex>>,
}

impl LinearizationResult {
    pub fn to_json(&self) -> Value {
        json!({
            "status": match self.status { Status::Linearized => "Linearized", Status::Obstructed => "Obstructed" },
            "h": germ_to_json(&self.h),
            "free_slots": slots_json(&self.free_slots),
            "obstruction": self.obstruction.as_ref().map(|o| json!({
                "degree": o.degree,
                "exponents": o.monomial.exps(),
                "coordinate": o.coordinate + 1,
                "value": o.value.to_json(),
            })),
        })
    }
}

pub(crate) fn slots_json(slots: &[(MultiIndex, usize)]) -> Value {
    Value::Array(slots.iter().map(|(i, j)| json!({ "exponents": i.exps(), "coordinate": j + 1 })).collect())
}

#[derive(Clone, Copy)]
enum Side {
    /// `f∘h = h∘A`
    Right,
    /// `h∘f = A∘h`
    Left,
}

struct Solved<R: Ring> {
    h: GermJet<R>,
    free_slots: Vec<(MultiIndex, usize)>,
    obstruction: Option<Obstruction<R>>,
}

fn operators(a: &Matrix<ExactComplex>, m: usize, side: Side) -> Result<Vec<HomologicalMatrix>> {
    (2..=m)
        .map(|d| {
            let mut l = homological_matrix(a, d)?;
            if let Side::Left = side {
                l.matrix = l.matrix.map(|x| -x.clone());
            }
            Ok(l)
        })
        .collect()
}

fn free_columns(ops: &[HomologicalMatrix]) -> Vec<Vec<usize>> {
    ops.iter()
        .map(|l| {
            let zeros = vec![ExactComplex::zero(); l.matrix.rows()];
            solve_exact(&l.matrix, &zeros, |_| ExactComplex::zero()).expect("homogeneous system").free
        })
        .collect()
}

fn solve_degrees<R: ExactScalar>(
    f: &GermJet<R>,
    a: &Matrix<ExactComplex>,
    m: usize,
    side: Side,
    s: &[R],
) -> Result<Solved<R>> {
    if m > f.order() {
        return Err(Error::OrderIncrease { from: f.order(), to: m });
    }
    let f = f.project(m)?;
    let ops = operators(a, m, side)?;
    let free = free_columns(&ops);
    let total: usize = free.iter().map(Vec::len).sum();
    if !s.is_empty() && s.len() != total {
        return Err(Error::ParameterLengthMismatch { expected: total, got: s.len() });
    }
    let free_slots: Vec<(MultiIndex, usize)> =
        ops.iter().zip(&free).flat_map(|(l, cols)| cols.iter().map(move |&c| l.slot(c))).collect();

    let n = f.n();
    let mut h = GermJet::<R>::identity(n, m);
    let mut used = 0;
    for (l, cols) in ops.iter().zip(&free) {
        let d = l.degree;
        let fd = f.project(d)?;
        let hd = h.project(d)?;
        let rhs = match side {
            Side::Right => fd.compose(&hd)?,
            Side::Left => hd.compose(&fd)?,
        }
        .degree_vector(d);
        let base = used;
        let lookup = |c: usize| -> R {
            let k = cols.binary_search(&c).expect("free column");
            s.get(base + k).cloned().unwrap_or_else(R::zero)
        };
        match solve_exact(&l.matrix, &rhs, lookup) {
            Ok(sol) => h.set_degree_vector(d, &sol.values),
            Err(bad) => {
                let (monomial, coordinate) = l.slot(bad.row);
                return Ok(Solved {
                    h,
                    free_slots,
                    obstruction: Some(Obstruction { degree: d, monomial, coordinate, value: bad.residual }),
                });
            }
        }
        used += cols.len();
    }
    Ok(Solved { h, free_slots, obstruction: None })
}

/// Jet `h` tangent to the identity with `π_m(h⁻¹∘f∘h) = A·z`, or the first obstruction.
///
/// `s` fills the free unknowns in order; an empty `s` means all zeros.
pub fn linearize(f: &GermJet<ExactComplex>, m: usize, s: &[ExactComplex]) -> Result<LinearizationResult> {
    let a = f.linear_part().clone();
    let solved = solve_degrees(f, &a, m, Side::Right, s)?;
    Ok(LinearizationResult {
        status: if solved.obstruction.is_some() { Status::Obstructed } else { Status::Linearized },
        h: solved.h,
        free_slots: solved.free_slots,
        obstruction: solved.obstruction,
    })
}

/// `π_m(h₀∘ψ_{m,A}(s))` where `h₀ = linearize(f, m, 0)`.
pub fn normalization_family(f: &GermJet<ExactComplex>, m: usize, s: &[ExactComplex]) -> Result<GermJet<ExactComplex>> {
    let base = linearize(f, m, &[])?;
    if base.status == Status::Obstructed {
        return Err(Error::NotLinearizable { order: m });
    }
    let psi = centralizer_basis(f.linear_part(), m)?.psi(s)?;
    base.h.compose(&psi)
}

/// Polynomial family of linearizations with the achieved `t`-degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyLinearization {
    pub h_t: GermJet<ParamPoly<ExactComplex>>,
    pub d0: usize,
    /// Largest `deg_t` over coordinates, for each monomial with a nonzero coefficient.
    pub degree_report: Vec<(MultiIndex, usize)>,
}

impl FamilyLinearization {
    /// Monomials whose coefficient degree exceeds `d0·|i|`.
    pub fn violations(&self) -> Vec<(MultiIndex, usize)> {
        self.degree_report.iter().filter(|(i, deg)| *deg > self.d0 * i.degree()).cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "h_t": germ_to_json(&self.h_t),
            "d0": self.d0,
            "degree_report": self.degree_report.iter().map(|(i, d)| json!({
                "exponents": i.exps(),
                "degree": d,
                "bound": self.d0 * i.degree(),
            })).collect::<Vec<_>>(),
            "violations": self.violations().len(),
        })
    }
}

fn max_t_degree(f: &GermJet<ParamPoly<ExactComplex>>) -> usize {
    f.components().iter().flat_map(|c| c.coeffs().iter().map(|p| p.degree().max(0) as usize)).max().unwrap_or(0)
}

/// Solves `h_t∘f_t = A∘h_t` over `Q(i)[t]` with resonant coefficients set to 0.
///
/// `A` must not depend on `t`. A resonant right-hand side that is not the
/// zero polynomial yields [`Error::FamilyObstructed`] carrying that polynomial.
pub fn family_linearize(f: &GermJet<ParamPoly<ExactComplex>>, m: usize) -> Result<FamilyLinearization> {
    let lin = f.linear_part();
    if (0..lin.rows()).any(|r| lin.row(r).iter().any(|p| p.degree() > 0)) {
        return Err(Error::SpectrumUnsupported("linear part depends on the parameter".into()));
    }
    let a = lin.map(|p| p.coeff(0));
    let solved = solve_degrees(f, &a, m, Side::Left, &[])?;
    if let Some(o) = solved.obstruction {
        return Err(Error::FamilyObstructed {
            degree: o.degree,
            exponents: o.monomial.exps().to_vec(),
            coordinate: o.coordinate + 1,
            witness: o.value.coeffs().to_vec(),
        });
    }
    let h_t = solved.h;
    let space = h_t.component(0).space().clone();
    let mut degree_report = Vec::new();
    for idx in 1..space.len() {
        let deg = h_t.components().iter().map(|c| c.coeffs()[idx].degree()).max().unwrap_or(-1);
        if deg >= 0 {
            degree_report.push((space.monomial(idx).clone(), deg as usize));
        }
    }
    Ok(FamilyLinearization { d0: max_t_degree(f), h_t, degree_report })
}

/// `k₀ = (1/q) Σ_{i<q} A^{−i}∘k∘f^i`, which conjugates `f` to `A` when `k` conjugates `f^q` to `A^q = I`.
pub fn average_linearization(
    f: &GermJet<ExactComplex>,
    q: u64,
    k: &GermJet<ExactComplex>,
    m: usize,
) -> Result<GermJet<ExactComplex>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let f = f.project(m)?;
    let k = k.project(m)?;
    let a = f.linear_part().clone();
    if !a.pow(q).is_identity() {
        return Err(Error::TorsionMismatch { q: q as usize });
    }
    if k.compose(&f.iterate(q)?)? != k {
        return Err(Error::PreconditionFailed(format!("k does not conjugate f^{q} to the identity at order {m}")));
    }
    let a_inv = a.inverse()?;
    let mut sum = k.clone();
    let mut f_i = f.clone();
    let mut a_neg = a_inv.clone();
    for _ in 1..q {
        sum = sum.try_add(&k.compose(&f_i)?.left_linear(&a_neg)?)?;
        f_i = f_i.compose(&f)?;
        a_neg = a_neg.mul(&a_inv)?;
    }
    let k0 = sum.scale(&ExactComplex::from_ratio(1, q as i64));
    if k0.compose(&f)? != k0.left_linear(&a)? {
        return Err(Error::InvariantViolation("averaged jet does not conjugate f to its linear part".into()));
    }
    Ok(k0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiniteOrderVerdict {
    /// `f^q = id` at order `m`; `linearizer` satisfies `k₀∘f = A∘k₀`.
    LinearizableWitness { q: u64, linearizer: GermJet<ExactComplex> },
    /// `f^q ≠ id` at order `m`.
    NotLinearizable { q: u64, iterate: GermJet<ExactComplex> },
    Inconclusive { reason: String },
}

impl FiniteOrderVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            FiniteOrderVerdict::LinearizableWitness { q, linearizer } => {
                json!({ "verdict": "LinearizableWitness", "q": q, "linearizer": germ_to_json(linearizer) })
            }
            FiniteOrderVerdict::NotLinearizable { q, iterate } => {
                json!({ "verdict": "NotLinearizable", "q": q, "iterate": germ_to_json(iterate) })
            }
            FiniteOrderVerdict::Inconclusive { reason } => json!({ "verdict": "Inconclusive", "reason": reason }),
        }
    }
}

/// Decides linearizability of `f` with `l(D₀f) = 0` from `f^{q(A)} = id`.
pub fn finite_order_test(f: &GermJet<ExactComplex>, m: usize) -> Result<FiniteOrderVerdict> {
    let f = f.project(m)?;
    let spec = EigenSpec::from_diagonal(f.linear_part())?;
    let q = match multiplicative_invariants(&spec) {
        Ok((_, q)) => q,
        Err(Error::UnclassifiableSpectrum) => {
            return Ok(FiniteOrderVerdict::Inconclusive {
                reason: "eigenvalues are not certified roots of unity, so l(A) = 0 cannot be checked".into(),
            })
        }
        Err(e) => return Err(e),
    };
    let iterate = f.iterate(q)?;
    if !iterate.is_identity() {
        return Ok(FiniteOrderVerdict::NotLinearizable { q, iterate });
    }
    let linearizer = average_linearization(&f, q, &GermJet::identity(f.n(), m), m)?;
    Ok(FiniteOrderVerdict::LinearizableWitness { q, linearizer })
}

/// `Az + (0, …, φ(z_j), …, 0)` with the perturbation in coordinate `j` (0-based).
pub fn embed_scalar(a: &Matrix<ExactComplex>, j: usize, phi: &ScalarJet<ExactComplex>, m: usize) -> Result<GermJet<ExactComplex>> {
    if phi.n() != 1 {
        return Err(Error::DimensionMismatch(format!("perturbation must be a one-variable jet, got {} variables", phi.n())));
    }
    let n = a.rows();
    if j >= n {
        return Err(Error::InvalidArgument(format!("axis {} outside 1..={n}", j + 1)));
    }
    if (0..n).any(|r| r != j && !a.get(r, j).is_zero()) {
        return Err(Error::NotEigendirection(j + 1));
    }
    if let Some(v) = phi.valuation() {
        if v < 2 {
            return Err(Error::ValuationTooLow(v));
        }
    }
    let mut f = GermJet::linear(a, m)?;
    let mut comps = f.components().to_vec();
    for (e, c) in phi.terms() {
        let d = e.exps()[0];
        if d as usize > m {
            continue;
        }
        let mut exps = vec![0; n];
        exps[j] = d;
        comps[j].add_term(&MultiIndex::new(exps), c)?;
    }
    f = GermJet::new(comps)?;
    Ok(f)
}
