use std::fmt;

use super::scalar::{PowerTable, ScalarJet};
use super::space::MultiIndex;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rings::{Field, Ring};

/// Order-`m` jet of a self-map of `(C^n, 0)`.
///
/// Components have zero constant term. The linear part is cached and always
/// equals the degree-1 coefficients of the components.
#[derive(Clone, PartialEq)]
pub struct GermJet<R: Ring> {
    components: Vec<ScalarJet<R>>,
    linear_part: Matrix<R>,
}

impl<R: Ring> GermJet<R> {
    pub fn new(components: Vec<ScalarJet<R>>) -> Result<Self> {
        let n = components.len();
        let first = components.first().ok_or_else(|| Error::DimensionMismatch("germ without components".into()))?;
        let m = first.order();
        for (j, c) in components.iter().enumerate() {
            if c.n() != n || c.order() != m {
                return Err(Error::DimensionMismatch(format!(
                    "component {} lives in (n={}, m={}), expected (n={n}, m={m})",
                    j + 1,
                    c.n(),
                    c.order()
                )));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::InvariantViolation(format!("component {} has a nonzero constant term", j + 1)));
            }
        }
        let linear_part = linear_part_of(&components);
        Ok(Self { components, linear_part })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::new((0..n).map(|k| ScalarJet::variable(n, m, k)).collect()).expect("identity is well formed")
    }

    /// The linear germ `z ↦ A z`.
    pub fn linear(a: &Matrix<R>, m: usize) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::DimensionMismatch("linear part must be a nonempty square matrix".into()));
        }
        let n = a.rows();
        let comps = (0..n)
            .map(|r| {
                let mut c = ScalarJet::zero(n, m);
                for k in 0..n {
                    c.set_coeff(&MultiIndex::unit(n, k), a.get(r, k).clone())?;
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn components(&self) -> &[ScalarJet<R>] {
        &self.components
    }

    /// Component `j`, 0-based.
    pub fn component(&self, j: usize) -> &ScalarJet<R> {
        &self.components[j]
    }

    pub fn linear_part(&self) -> &Matrix<R> {
        &self.linear_part
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n(), self.order())
    }

    pub fn is_tangent_to_identity(&self) -> bool {
        self.linear_part.is_identity()
    }

    /// The germ minus its linear part.
    pub fn nonlinear_part(&self) -> Vec<ScalarJet<R>> {
        self.components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                for v in c.degree_slice_mut(1) {
                    *v = R::zero();
                }
                c
            })
            .collect()
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> GermJet<S> {
        let comps = self
            .components
            .iter()
            .map(|c| ScalarJet::from_dense(super::JetSpace::get(self.n(), self.order()), c.coeffs().iter().map(&f).collect()))
            .collect();
        GermJet::new(comps).expect("coefficient maps preserve zero constant terms")
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "germs over (n={}, m={}) and (n={}, m={})",
                self.n(),
                self.order(),
                other.n(),
                other.order()
            )));
        }
        Ok(())
    }

    /// Jet of `f ∘ g`, i.e. `z ↦ f(g(z))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_shape(g)?;
        let powers = PowerTable::new(&g.components, self.components.iter());
        Self::new(self.components.iter().map(|c| powers.evaluate(c)).collect())
    }

    /// `A ∘ self` for a matrix `A`.
    pub fn left_linear(&self, a: &Matrix<R>) -> Result<Self> {
        if a.cols() != self.n() || a.rows() != self.n() {
            return Err(Error::DimensionMismatch("matrix size differs from germ dimension".into()));
        }
        let comps = (0..self.n())
            .map(|r| {
                let mut acc = ScalarJet::zero(self.n(), self.order());
                for k in 0..self.n() {
                    let a_rk = a.get(r, k);
                    if !a_rk.is_zero() {
                        acc = acc.try_add(&self.components[k].scale(a_rk))?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// `q`-fold composition `f ∘ … ∘ f`.
    pub fn iterate(&self, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
        }
        let mut acc: Option<Self> = None;
        let mut sq = self.clone();
        let mut q = q;
        while q > 0 {
            if q & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.compose(&sq)?,
                });
            }
            q >>= 1;
            if q > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc.expect("q >= 1"))
    }

    /// Truncation `π_{m'}`.
    pub fn project(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("jet order must be at least 1".into()));
        }
        Self::new(self.components.iter().map(|c| c.project(m)).collect::<Result<_>>()?)
    }

    pub fn lift(&self, m: usize) -> Self {
        Self::new(self.components.iter().map(|c| c.lift(m)).collect()).expect("lifting preserves shape")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Self::new(self.components.iter().zip(&other.components).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Self::new(self.components.iter().zip(&other.components).map(|(a, b)| a.try_sub(b)).collect::<Result<_>>()?)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.components.iter().map(|x| x.scale(c)).collect()).expect("scaling preserves shape")
    }

    /// Degree-`d` coefficients in slot order: graded-lex rank outer, coordinate inner.
    pub fn degree_vector(&self, d: usize) -> Vec<R> {
        let count = self.components[0].degree_slice(d).len();
        let mut out = Vec::with_capacity(count * self.n());
        for r in 0..count {
            for c in &self.components {
                out.push(c.degree_slice(d)[r].clone());
            }
        }
        out
    }

    /// Inverse of [`degree_vector`](Self::degree_vector).
    pub fn set_degree_vector(&mut self, d: usize, values: &[R]) {
        let n = self.n();
        for (k, v) in values.iter().enumerate() {
            self.components[k % n].degree_slice_mut(d)[k / n] = v.clone();
        }
        if d == 1 {
            self.linear_part = linear_part_of(&self.components);
        }
    }

    /// Restriction to the `j`-th coordinate axis, as a one-variable jet of component `j`.
    pub fn restrict_to_axis(&self, j: usize) -> ScalarJet<R> {
        let mut out = ScalarJet::zero(1, self.order());
        for (i, c) in self.components[j].terms() {
            if i.exps().iter().enumerate().all(|(k, &e)| k == j || e == 0) {
                out.set_coeff(&MultiIndex::new(vec![i.exps()[j]]), c.clone()).expect("degree within order");
            }
        }
        out
    }
}

impl<F: Field> GermJet<F> {
    /// Jet of the compositional inverse; needs an invertible linear part.
    ///
    /// Solves `g = A⁻¹(z − F(g))` degree by degree, where `f = Az + F`; each
    /// step only composes at the order being fixed.
    pub fn inverse(&self) -> Result<Self> {
        let a_inv = self.linear_part.inverse()?;
        let n = self.n();
        let m = self.order();
        let nonlinear = self.nonlinear_part();
        let mut g = GermJet::linear(&a_inv, 1)?;
        for d in 2..=m {
            let g_d = g.lift(d);
            let f_d: Vec<ScalarJet<F>> = nonlinear.iter().map(|c| c.project(d)).collect::<Result<_>>()?;
            let powers = PowerTable::new(&g_d.components, f_d.iter());
            let rest: Vec<ScalarJet<F>> = f_d.iter().map(|c| powers.evaluate(c)).collect();
            let mut next = GermJet::identity(n, d).components;
            for (x, r) in next.iter_mut().zip(&rest) {
                *x = x.try_sub(r)?;
            }
            g = GermJet::new(next)?.left_linear(&a_inv)?;
        }
        Ok(g.lift(m))
    }
}

fn linear_part_of<R: Ring>(components: &[ScalarJet<R>]) -> Matrix<R> {
    let n = components.len();
    let mut a = Matrix::zeros(n, n);
    for (r, c) in components.iter().enumerate() {
        for (k, v) in c.degree_slice(1).iter().enumerate() {
            a.set(r, k, v.clone());
        }
    }
    a
}

impl<R: Ring> fmt::Debug for GermJet<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

/// Jet of `f ∘ g`.
pub fn germ_compose<R: Ring>(f: &GermJet<R>, g: &GermJet<R>) -> Result<GermJet<R>> {
    f.compose(g)
}

pub fn germ_inverse<F: Field>(f: &GermJet<F>) -> Result<GermJet<F>> {
    f.inverse()
}

pub fn germ_iterate<R: Ring>(f: &GermJet<R>, q: u64) -> Result<GermJet<R>> {
    f.iterate(q)
}

pub fn project<R: Ring>(f: &GermJet<R>, m: usize) -> Result<GermJet<R>> {
    f.project(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::ExactComplex;

    type G = GermJet<ExactComplex>;
    type J = ScalarJet<ExactComplex>;

    fn c(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    fn one_var(m: usize, coeffs: &[(u32, i64)]) -> G {
        let j = J::from_terms(1, m, coeffs.iter().map(|&(e, v)| (MultiIndex::new(vec![e]), c(v)))).unwrap();
        G::new(vec![j]).unwrap()
    }

    #[test]
    fn compose_one_variable() {
        let f = one_var(3, &[(1, 1), (2, 1)]);
        assert_eq!(germ_compose(&f, &f).unwrap(), one_var(3, &[(1, 1), (2, 2), (3, 2)]));
        assert_eq!(germ_compose(&f, &G::identity(1, 3)).unwrap(), f);
    }

    #[test]
    fn inverse_one_variable() {
        let f = one_var(3, &[(1, 1), (2, 1)]);
        assert_eq!(germ_inverse(&f).unwrap(), one_var(3, &[(1, 1), (2, -1), (3, 2)]));
        assert_eq!(germ_inverse(&G::identity(2, 4)).unwrap(), G::identity(2, 4));
        let singular = one_var(3, &[(2, 1)]);
        assert_eq!(germ_inverse(&singular).unwrap_err(), Error::SingularLinearPart);
    }

    #[test]
    fn iterate_one_variable() {
        let f = one_var(3, &[(1, -1), (2, 1)]);
        assert_eq!(germ_iterate(&f, 1).unwrap(), f);
        assert_eq!(germ_iterate(&f, 2).unwrap(), one_var(3, &[(1, 1), (3, -2)]));
    }

    #[test]
    fn linear_maps_compose_as_matrices() {
        let a = Matrix::from_rows(vec![vec![c(1), c(2)], vec![c(0), c(3)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![c(2), c(0)], vec![c(1), c(1)]]).unwrap();
        let ab = G::linear(&a, 3).unwrap().compose(&G::linear(&b, 3).unwrap()).unwrap();
        assert_eq!(ab, G::linear(&a.mul(&b).unwrap(), 3).unwrap());
        assert_eq!(G::linear(&a, 2).unwrap().iterate(5).unwrap(), G::linear(&a.pow(5), 2).unwrap());
    }

    #[test]
    fn projection() {
        let f = one_var(3, &[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(project(&f, 3).unwrap(), f);
        assert_eq!(project(&f, 2).unwrap(), one_var(2, &[(1, 1), (2, 1)]));
        assert!(matches!(project(&f, 4), Err(Error::OrderIncrease { .. })));
    }

    #[test]
    fn constant_terms_are_rejected() {
        let j = J::from_terms(1, 2, [(MultiIndex::new(vec![0]), c(1))]).unwrap();
        assert!(matches!(G::new(vec![j]), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn degree_vectors_round_trip() {
        let mut f = G::identity(2, 3);
        let v: Vec<_> = (1..=6).map(c).collect();
        f.set_degree_vector(2, &v);
        assert_eq!(f.degree_vector(2), v);
        assert_eq!(f.component(0).coeff(&[1, 1].into()), c(3));
        assert_eq!(f.component(1).coeff(&[0, 2].into()), c(6));
    }
}
