//! Jet-level centralizers of a linear map.
//!
//! The commutator `h ↦ h∘A − A∘h` preserves homogeneous degree, so its null
//! space is assembled degree by degree. Unknowns of degree `d` are indexed by
//! slot `rank·n + j`: graded-lex rank of the monomial within the degree, then
//! the coordinate.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::germ_to_json;
use crate::jet::{GermJet, JetSpace, MultiIndex, PowerTable, ScalarJet};
use crate::linalg::{in_span, null_space, Matrix};
use crate::rings::{ExactComplex, Ring};

/// Matrix of `H ↦ H∘A − A·H` on `n`-tuples of homogeneous polynomials of one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologicalMatrix {
    pub degree: usize,
    pub n: usize,
    pub matrix: Matrix<ExactComplex>,
}

impl HomologicalMatrix {
    /// Monomial and coordinate (0-based) of a slot.
    pub fn slot(&self, index: usize) -> (MultiIndex, usize) {
        let space = JetSpace::get(self.n, self.degree);
        let first = space.degree_range(self.degree).start;
        (space.monomial(first + index / self.n).clone(), index % self.n)
    }
}

/// Matrix of `φ ↦ φ∘A` on scalar homogeneous polynomials of degree `d`,
/// columns indexed by the source monomial.
pub fn substitution_matrix<R: Ring>(a: &Matrix<R>, d: usize) -> Result<Matrix<R>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch("linear part must be a nonempty square matrix".into()));
    }
    let n = a.rows();
    let lin = GermJet::linear(a, d.max(1))?;
    let space = JetSpace::get(n, d.max(1));
    let range = space.degree_range(d);
    let sources: Vec<ScalarJet<R>> =
        range.clone().map(|k| ScalarJet::monomial(n, d.max(1), space.monomial(k), R::one())).collect();
    let powers = PowerTable::new(lin.components(), sources.iter());
    let mut p = Matrix::zeros(range.len(), range.len());
    for (col, src) in sources.iter().enumerate() {
        let image = powers.evaluate(src);
        for (row, v) in image.degree_slice(d).iter().enumerate() {
            p.set(row, col, v.clone());
        }
    }
    Ok(p)
}

pub fn homological_matrix(a: &Matrix<ExactComplex>, degree: usize) -> Result<HomologicalMatrix> {
    if degree < 2 {
        return Err(Error::InvalidArgument("homological degree must be at least 2".into()));
    }
    a.inverse()?;
    let n = a.rows();
    let p = substitution_matrix(a, degree)?;
    let count = p.rows();
    let mut l = Matrix::zeros(count * n, count * n);
    for s in 0..count {
        for j in 0..n {
            let row = s * n + j;
            for r in 0..count {
                let v = p.get(s, r);
                if !v.is_zero() {
                    l.set(row, r * n + j, v.clone());
                }
            }
            for k in 0..n {
                let col = s * n + k;
                let v = l.get(row, col).clone() - a.get(j, k);
                l.set(row, col, v);
            }
        }
    }
    Ok(HomologicalMatrix { degree, n, matrix: l })
}

/// Matrix of the scalar operator `φ ↦ φ∘A − φ` on degree `d`.
pub fn scalar_difference_matrix(a: &Matrix<ExactComplex>, d: usize) -> Result<Matrix<ExactComplex>> {
    let mut p = substitution_matrix(a, d)?;
    for k in 0..p.rows() {
        let v = p.get(k, k).clone() - &ExactComplex::one();
        p.set(k, k, v);
    }
    Ok(p)
}

/// Whether `φ∘A − φ = ψ` has a homogeneous degree-`d` solution, decided by exact rank.
pub fn difference_equation_solvable(a: &Matrix<ExactComplex>, d: usize, psi: &[ExactComplex]) -> Result<bool> {
    let l = scalar_difference_matrix(a, d)?;
    if psi.len() != l.rows() {
        return Err(Error::DimensionMismatch(format!("right-hand side has {} entries, expected {}", psi.len(), l.rows())));
    }
    let mut rows: Vec<Vec<ExactComplex>> = (0..l.rows()).map(|r| l.row(r).to_vec()).collect();
    for (row, b) in rows.iter_mut().zip(psi) {
        row.push(b.clone());
    }
    let augmented = Matrix::from_rows(rows)?;
    Ok(augmented.rank() == l.rank())
}

/// Tangent-to-identity jets spanning `π_m(Cent(A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerBasis {
    pub m: usize,
    pub basis: Vec<GermJet<ExactComplex>>,
    pub delta: usize,
}

impl CentralizerBasis {
    fn from_basis(m: usize, basis: Vec<GermJet<ExactComplex>>) -> Self {
        let delta = basis.len();
        Self { m, basis, delta }
    }

    /// `id + Σ s_k (c_k − id)`.
    pub fn psi(&self, s: &[ExactComplex]) -> Result<GermJet<ExactComplex>> {
        if s.len() != self.delta {
            return Err(Error::ParameterLengthMismatch { expected: self.delta, got: s.len() });
        }
        let n = self.basis.first().map_or(1, GermJet::n);
        let id = GermJet::identity(n, self.m);
        let mut out = id.clone();
        for (c, sk) in self.basis.iter().zip(s) {
            if !sk.is_zero() {
                out = out.try_add(&c.try_sub(&id)?.scale(sk))?;
            }
        }
        Ok(out)
    }

    /// Coefficients of degrees `2..=m` of each basis element, concatenated.
    pub fn coefficient_vectors(&self) -> Vec<Vec<ExactComplex>> {
        self.basis.iter().map(|c| nonlinear_vector(c)).collect()
    }

    /// Mutual membership of the two spans.
    pub fn same_span(&self, other: &CentralizerBasis) -> bool {
        let a = self.coefficient_vectors();
        let b = other.coefficient_vectors();
        a.iter().all(|v| in_span(&b, v)) && b.iter().all(|v| in_span(&a, v))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.m,
            "delta": self.delta,
            "basis": self.basis.iter().map(germ_to_json).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn nonlinear_vector(c: &GermJet<ExactComplex>) -> Vec<ExactComplex> {
    (2..=c.order()).flat_map(|d| c.degree_vector(d)).collect()
}

pub fn centralizer_basis(a: &Matrix<ExactComplex>, m: usize) -> Result<CentralizerBasis> {
    if m < 2 {
        return Err(Error::InvalidArgument("centralizer order must be at least 2".into()));
    }
    a.inverse()?;
    let n = a.rows();
    let mut basis = Vec::new();
    for d in 2..=m {
        let l = homological_matrix(a, d)?;
        for v in null_space(&l.matrix) {
            let mut c = GermJet::identity(n, m);
            c.set_degree_vector(d, &v);
            basis.push(c);
        }
    }
    Ok(CentralizerBasis::from_basis(m, basis))
}

/// `ψ_{m,A}(s)` for the canonical basis order.
pub fn psi_a(a: &Matrix<ExactComplex>, m: usize, s: &[ExactComplex]) -> Result<GermJet<ExactComplex>> {
    centralizer_basis(a, m)?.psi(s)
}

/// Whether `π_m(h∘A) = π_m(A∘h)`.
pub fn verify_commute<R: Ring>(h: &GermJet<R>, a: &Matrix<R>, m: usize) -> Result<bool> {
    let h = h.project(m.min(h.order()))?;
    let lin = GermJet::linear(a, h.order())?;
    Ok(h.compose(&lin)? == h.left_linear(a)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleKind {
    /// `diag(λ, λ⁻¹)`.
    Elliptic(ExactComplex),
    /// The 2×2 unipotent Jordan block.
    Jordan2,
}

impl OracleKind {
    pub fn matrix(&self) -> Result<Matrix<ExactComplex>> {
        match self {
            OracleKind::Elliptic(l) => Ok(Matrix::diagonal(&[l.clone(), l.inv()?])),
            OracleKind::Jordan2 => Matrix::from_rows(vec![
                vec![ExactComplex::one(), ExactComplex::one()],
                vec![ExactComplex::zero(), ExactComplex::one()],
            ]),
        }
    }
}

/// Closed-form centralizer bases: `(z₁ + z₁φ₁(z₁z₂), z₂ + z₂φ₂(z₁z₂))` for the
/// elliptic case and `(z₁ + k(z₂), z₂)` for the Jordan block.
pub fn centralizer_oracle(kind: &OracleKind, m: usize) -> Result<CentralizerBasis> {
    if m < 2 {
        return Err(Error::InvalidArgument("centralizer order must be at least 2".into()));
    }
    let id = GermJet::<ExactComplex>::identity(2, m);
    let with_term = |j: usize, e: [u32; 2]| -> Result<GermJet<ExactComplex>> {
        let mut comps = id.components().to_vec();
        comps[j].set_coeff(&MultiIndex::from(e), ExactComplex::one())?;
        GermJet::new(comps)
    };
    let mut basis = Vec::new();
    match kind {
        OracleKind::Elliptic(l) => {
            if l.is_zero() {
                return Err(Error::InvalidArgument("lambda must be nonzero".into()));
            }
            let one = ExactComplex::one();
            if [1u64, 2, 4].iter().any(|&k| crate::rings::pow(l, k) == one) {
                return Err(Error::RootOfUnityLambda);
            }
            let mut k = 1;
            while 2 * k + 1 <= m {
                let k32 = k as u32;
                basis.push(with_term(0, [k32 + 1, k32])?);
                basis.push(with_term(1, [k32, k32 + 1])?);
                k += 1;
            }
        }
        OracleKind::Jordan2 => {
            for k in 2..=m as u32 {
                basis.push(with_term(0, [0, k])?);
            }
        }
    }
    Ok(CentralizerBasis::from_basis(m, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{resonances, EigenSpec};
    use proptest::prelude::*;

    fn c(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    fn elliptic2() -> Matrix<ExactComplex> {
        Matrix::diagonal(&[c(2), ExactComplex::from_ratio(1, 2)])
    }

    fn jordan() -> Matrix<ExactComplex> {
        OracleKind::Jordan2.matrix().unwrap()
    }

    fn germ(m: usize, terms: &[(usize, [u32; 2], i64)]) -> GermJet<ExactComplex> {
        let mut comps = GermJet::<ExactComplex>::identity(2, m).components().to_vec();
        for &(j, e, v) in terms {
            comps[j].add_term(&MultiIndex::from(e), &c(v)).unwrap();
        }
        GermJet::new(comps).unwrap()
    }

    #[test]
    fn diagonal_operator_entries() {
        let l = homological_matrix(&elliptic2(), 2).unwrap();
        assert!(l.matrix.is_diagonal());
        // slot (i=(2,0), j=1) is index 0
        assert_eq!(l.matrix.get(0, 0), &c(2));
        assert_eq!(l.slot(0), (MultiIndex::from([2, 0]), 0));
        assert!(homological_matrix(&Matrix::identity(3), 3).unwrap().matrix.is_zero());
        let singular = Matrix::diagonal(&[c(1), c(0)]);
        assert_eq!(homological_matrix(&singular, 2).unwrap_err(), Error::SingularLinearPart);
    }

    #[test]
    fn shift_difference_operator_is_binomial_and_nilpotent() {
        for d in 2..=8usize {
            let l = scalar_difference_matrix(&jordan(), d).unwrap();
            assert!(l.is_lower_triangular_strict());
            for col in 0..=d {
                for row in col + 1..=d {
                    // (z₁+z₂)^{d−col} z₂^{col} contributes C(d−col, row−col) to z₁^{d−row} z₂^{row}
                    assert_eq!(l.get(row, col), &c(crate::jet::binomial(d - col, row - col) as i64));
                }
            }
            let ker = null_space(&l);
            assert_eq!(ker.len(), 1);
            let mut z2 = vec![c(0); d + 1];
            z2[d] = c(1);
            assert_eq!(ker[0], z2);
        }
    }

    #[test]
    fn difference_equation_has_solutions_for_pure_z2_right_sides() {
        // φ = z₁z₂^{d−1} gives φ(z₁+z₂, z₂) − φ = z₂^d.
        for d in 2..=8usize {
            let mut psi = vec![c(0); d + 1];
            psi[d] = c(1);
            assert!(difference_equation_solvable(&jordan(), d, &psi).unwrap());
        }
    }

    #[test]
    fn elliptic_centralizer_matches_closed_form() {
        for m in 2..=8 {
            let b = centralizer_basis(&elliptic2(), m).unwrap();
            assert_eq!(b.delta, 2 * ((m - 1) / 2));
            let oracle = centralizer_oracle(&OracleKind::Elliptic(c(2)), m).unwrap();
            assert_eq!(b, oracle);
            assert!(b.same_span(&oracle));
        }
    }

    #[test]
    fn jordan_centralizer_strictly_contains_the_closed_form() {
        for m in 2..=10 {
            let b = centralizer_basis(&jordan(), m).unwrap();
            assert_eq!(b.delta, 2 * (m - 1));
            let oracle = centralizer_oracle(&OracleKind::Jordan2, m).unwrap();
            assert_eq!(oracle.delta, m - 1);
            let big = b.coefficient_vectors();
            assert!(oracle.coefficient_vectors().iter().all(|v| in_span(&big, v)));
            assert!(!b.same_span(&oracle));
        }
        // Outside the closed form: (z₁ + z₁z₂, z₂ + z₂²).
        assert!(verify_commute(&germ(4, &[(0, [1, 1], 1), (1, [0, 2], 1)]), &jordan(), 4).unwrap());
    }

    #[test]
    fn commutation_examples() {
        assert!(verify_commute(&GermJet::identity(2, 4), &jordan(), 4).unwrap());
        assert!(verify_commute(&germ(3, &[(0, [0, 2], 1)]), &jordan(), 3).unwrap());
        assert!(!verify_commute(&germ(3, &[(1, [2, 0], 1)]), &jordan(), 3).unwrap());
    }

    #[test]
    fn nonresonant_and_oracle_edge_cases() {
        assert_eq!(centralizer_basis(&Matrix::diagonal(&[c(3), c(5)]), 6).unwrap().delta, 0);
        assert_eq!(centralizer_oracle(&OracleKind::Jordan2, 2).unwrap().delta, 1);
        assert_eq!(centralizer_oracle(&OracleKind::Elliptic(ExactComplex::i()), 4).unwrap_err(), Error::RootOfUnityLambda);
    }

    #[test]
    fn psi_examples() {
        let a = elliptic2();
        assert_eq!(psi_a(&a, 3, &[c(0), c(0)]).unwrap(), GermJet::identity(2, 3));
        assert_eq!(psi_a(&a, 3, &[c(1), c(0)]).unwrap(), germ(3, &[(0, [2, 1], 1)]));
        assert!(matches!(psi_a(&a, 3, &[c(1)]), Err(Error::ParameterLengthMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn delta_counts_resonances_for_diagonal_parts() {
        let diagonals: [&[ExactComplex]; 4] = [
            &[c(2), ExactComplex::from_ratio(1, 2)],
            &[c(2), c(4)],
            &[c(2), c(3), c(6)],
            &[ExactComplex::i(), -ExactComplex::i()],
        ];
        for d in diagonals {
            let a = Matrix::diagonal(d);
            let spec = EigenSpec::exact(d.to_vec()).unwrap();
            for m in 2..=5 {
                assert_eq!(centralizer_basis(&a, m).unwrap().delta, resonances(&spec, m).unwrap().len());
            }
        }
    }

    fn arb_s(len: usize) -> impl Strategy<Value = Vec<ExactComplex>> {
        prop::collection::vec((-4i64..5, 1i64..4), len)
            .prop_map(|v| v.into_iter().map(|(p, q)| ExactComplex::from_ratio(p, q)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn centralizer_is_closed_under_composition(s1 in arb_s(6), s2 in arb_s(6)) {
            let b = centralizer_basis(&jordan(), 4).unwrap();
            let h = b.psi(&s1).unwrap().compose(&b.psi(&s2).unwrap()).unwrap();
            prop_assert!(verify_commute(&h, &jordan(), 4).unwrap());
            let e = centralizer_basis(&elliptic2(), 5).unwrap();
            let h = e.psi(&s1[..4]).unwrap().compose(&e.psi(&s2[..4]).unwrap()).unwrap();
            prop_assert!(verify_commute(&h, &elliptic2(), 5).unwrap());
        }
    }
}
