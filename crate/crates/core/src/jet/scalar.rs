use std::fmt;
use std::sync::Arc;

use super::space::{JetSpace, MultiIndex};
use crate::error::{Error, Result};
use crate::rings::Ring;

/// Truncated power series in `n` variables, degrees `0..=m`, stored densely.
#[derive(Clone)]
pub struct ScalarJet<R: Ring> {
    space: Arc<JetSpace>,
    coeffs: Vec<R>,
}

impl<R: Ring> ScalarJet<R> {
    pub fn zero(n: usize, m: usize) -> Self {
        let space = JetSpace::get(n, m);
        let coeffs = vec![R::zero(); space.len()];
        Self { space, coeffs }
    }

    pub fn constant(n: usize, m: usize, c: R) -> Self {
        let mut j = Self::zero(n, m);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate function `z_k` (0-based `k`).
    pub fn variable(n: usize, m: usize, k: usize) -> Self {
        Self::monomial(n, m, &MultiIndex::unit(n, k), R::one())
    }

    pub fn monomial(n: usize, m: usize, i: &MultiIndex, c: R) -> Self {
        let mut j = Self::zero(n, m);
        if let Some(idx) = j.space.index_of(i) {
            j.coeffs[idx] = c;
        }
        j
    }

    pub fn from_terms(n: usize, m: usize, terms: impl IntoIterator<Item = (MultiIndex, R)>) -> Result<Self> {
        let mut j = Self::zero(n, m);
        for (i, c) in terms {
            j.add_term(&i, &c)?;
        }
        Ok(j)
    }

    pub(crate) fn from_dense(space: Arc<JetSpace>, coeffs: Vec<R>) -> Self {
        debug_assert_eq!(coeffs.len(), space.len());
        Self { space, coeffs }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn order(&self) -> usize {
        self.space.order()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }


    /// Coefficient of `z^i`; zero when `|i| > m`.
    pub fn coeff(&self, i: &MultiIndex) -> R {
        self.space.index_of(i).map_or_else(R::zero, |k| self.coeffs[k].clone())
    }

    pub fn set_coeff(&mut self, i: &MultiIndex, c: R) -> Result<()> {
        let k = self.index(i)?;
        self.coeffs[k] = c;
        Ok(())
    }

    pub fn add_term(&mut self, i: &MultiIndex, c: &R) -> Result<()> {
        let k = self.index(i)?;
        self.coeffs[k] += c;
        Ok(())
    }

    fn index(&self, i: &MultiIndex) -> Result<usize> {
        if i.n() != self.n() {
            return Err(Error::DimensionMismatch(format!("{} exponents for {} variables", i.n(), self.n())));
        }
        self.space
            .index_of(i)
            .ok_or(Error::DegreeOutOfRange { degree: i.degree(), max: self.order() })
    }

    /// Nonzero terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.space.monomial(k), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| self.space.monomial(k).degree())
    }

    pub fn constant_term(&self) -> &R {
        &self.coeffs[0]
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "jets over (n={}, m={}) and (n={}, m={})",
                self.n(),
                self.order(),
                other.n(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        let coeffs = self.coeffs.iter().map(|x| if x.is_zero() { x.clone() } else { x.clone() * c }).collect();
        Self { space: self.space.clone(), coeffs }
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![R::zero(); self.coeffs.len()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let table = self.space.products(a);
            for (b, y) in other.coeffs[..table.len()].iter().enumerate() {
                if !y.is_zero() {
                    out[table[b] as usize] += &(x.clone() * y);
                }
            }
        }
        Self { space: self.space.clone(), coeffs: out }
    }

    /// Homogeneous part of degree `d` as a jet of the same order.
    pub fn homogeneous(&self, d: usize) -> Self {
        let mut out = Self::zero(self.n(), self.order());
        if d <= self.order() {
            let r = self.space.degree_range(d);
            out.coeffs[r.clone()].clone_from_slice(&self.coeffs[r]);
        }
        out
    }

    /// Coefficients of degree `d` in graded-lex order.
    pub fn degree_slice(&self, d: usize) -> &[R] {
        &self.coeffs[self.space.degree_range(d)]
    }

    pub(crate) fn degree_slice_mut(&mut self, d: usize) -> &mut [R] {
        let r = self.space.degree_range(d);
        &mut self.coeffs[r]
    }

    /// Truncation `π_{m'}`.
    pub fn project(&self, m: usize) -> Result<Self> {
        if m > self.order() {
            return Err(Error::OrderIncrease { from: self.order(), to: m });
        }
        let space = JetSpace::get(self.n(), m);
        let coeffs = self.coeffs[..space.len()].to_vec();
        Ok(Self { space, coeffs })
    }

    /// Same series viewed at a higher order, new coefficients zero.
    pub fn lift(&self, m: usize) -> Self {
        let space = JetSpace::get(self.n(), m.max(self.order()));
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(space.len(), R::zero());
        Self { space, coeffs }
    }

    /// Substitutes `z_k ← g_k`. Every `g_k` must have zero constant term and
    /// share this jet's order; the result lives in the `g` variables.
    pub fn substitute(&self, g: &[ScalarJet<R>]) -> Result<Self> {
        if g.len() != self.n() {
            return Err(Error::DimensionMismatch(format!("{} substitutions for {} variables", g.len(), self.n())));
        }
        let first = g.first().expect("at least one variable");
        for gk in g {
            first.same_space(gk)?;
            if !gk.constant_term().is_zero() {
                return Err(Error::InvariantViolation("substituted series must vanish at 0".into()));
            }
        }
        let m = self.order().min(first.order());
        let src = self.project(m)?;
        let g: Vec<ScalarJet<R>> = g.iter().map(|gk| gk.project(m)).collect::<Result<_>>()?;
        let powers = PowerTable::new(&g, std::iter::once(&src));
        Ok(powers.evaluate(&src).lift(first.order()))
    }
}

/// Powers `g^e` of a substitution, restricted to the exponents the sources need.
pub(crate) struct PowerTable<R: Ring> {
    powers: Vec<Option<ScalarJet<R>>>,
}

impl<R: Ring> PowerTable<R> {
    pub(crate) fn new<'a>(g: &[ScalarJet<R>], sources: impl IntoIterator<Item = &'a ScalarJet<R>>) -> Self {
        let n = g.len();
        let target = g[0].space().clone();
        let src_space = JetSpace::get(n, target.order());
        let mut needed = vec![false; src_space.len()];
        for s in sources {
            for (k, c) in s.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    needed[k] = true;
                }
            }
        }
        // Close under the parent relation e -> e - unit(first nonzero coordinate).
        for k in (1..src_space.len()).rev() {
            if needed[k] {
                let (parent, _) = parent_of(&src_space, k);
                needed[parent] = true;
            }
        }
        let mut powers: Vec<Option<ScalarJet<R>>> = vec![None; src_space.len()];
        powers[0] = Some(ScalarJet::constant(target.n(), target.order(), R::one()));
        for k in 1..src_space.len() {
            if !needed[k] {
                continue;
            }
            let (parent, var) = parent_of(&src_space, k);
            let p = powers[parent].as_ref().expect("parents precede children");
            powers[k] = Some(if parent == 0 { g[var].clone() } else { p.mul_unchecked(&g[var]) });
        }
        Self { powers }
    }

    pub(crate) fn evaluate(&self, src: &ScalarJet<R>) -> ScalarJet<R> {
        let first = self.powers[0].as_ref().expect("unit power");
        let mut out = vec![R::zero(); first.coeffs.len()];
        for (k, c) in src.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.powers[k].as_ref().expect("needed power computed");
            for (o, x) in out.iter_mut().zip(&p.coeffs) {
                if !x.is_zero() {
                    *o += &(x.clone() * c);
                }
            }
        }
        ScalarJet { space: first.space.clone(), coeffs: out }
    }
}

fn parent_of(space: &JetSpace, k: usize) -> (usize, usize) {
    let e = space.monomial(k);
    let var = e.exps().iter().position(|&x| x > 0).expect("non-constant monomial");
    let mut p = e.exps().to_vec();
    p[var] -= 1;
    (space.index_of(&MultiIndex::new(p)).expect("parent in space"), var)
}

impl<R: Ring> PartialEq for ScalarJet<R> {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl<R: Ring> fmt::Debug for ScalarJet<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})z^{i:?}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [m={}]", self.order())
    }
}

/// Truncated product of two scalar jets.
pub fn jet_multiply<R: Ring>(a: &ScalarJet<R>, b: &ScalarJet<R>) -> Result<ScalarJet<R>> {
    a.try_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::ExactComplex;
    use proptest::prelude::*;

    type J = ScalarJet<ExactComplex>;

    fn c(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    #[test]
    fn product_of_variables() {
        let z1 = J::variable(2, 2, 0);
        let z2 = J::variable(2, 2, 1);
        assert_eq!(jet_multiply(&z1, &z2).unwrap(), J::monomial(2, 2, &[1, 1].into(), c(1)));
    }

    #[test]
    fn truncation_drops_high_degree() {
        let one = J::constant(2, 1, c(1));
        let z1 = J::variable(2, 1, 0);
        let p = jet_multiply(&one.try_add(&z1).unwrap(), &one.try_sub(&z1).unwrap()).unwrap();
        assert_eq!(p, one);
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = J::variable(2, 2, 0);
        let b = J::variable(2, 3, 0);
        assert!(matches!(jet_multiply(&a, &b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.project(3), Err(Error::OrderIncrease { from: 2, to: 3 })));
    }

    #[test]
    fn valuation_and_homogeneous_parts() {
        let j = J::from_terms(2, 4, [([0, 2].into(), c(3)), ([3, 1].into(), c(1))]).unwrap();
        assert_eq!(j.valuation(), Some(2));
        assert_eq!(j.homogeneous(4), J::monomial(2, 4, &[3, 1].into(), c(1)));
        assert_eq!(j.degree_slice(2), &[c(0), c(0), c(3)]);
    }

    fn arb_jet(n: usize, m: usize) -> impl Strategy<Value = J> {
        let len = JetSpace::get(n, m).len();
        prop::collection::vec(-3i64..4, len).prop_map(move |v| {
            ScalarJet::from_dense(JetSpace::get(n, m), v.into_iter().map(c).collect())
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(a in arb_jet(2, 4), b in arb_jet(2, 4), d in arb_jet(2, 4)) {
            prop_assert_eq!(jet_multiply(&a, &b).unwrap(), jet_multiply(&b, &a).unwrap());
            let left = jet_multiply(&jet_multiply(&a, &b).unwrap(), &d).unwrap();
            let right = jet_multiply(&a, &jet_multiply(&b, &d).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
