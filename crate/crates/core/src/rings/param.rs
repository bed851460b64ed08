use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::{ExactComplex, ExactScalar, Ring};
use crate::error::{Error, Result};

/// Polynomial in one parameter `t` over a base ring, coefficients by ascending power.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and degree −1.
#[derive(Clone, PartialEq)]
pub struct ParamPoly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> ParamPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The parameter `t` itself.
    pub fn t() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    pub fn monomial(c: R, power: usize) -> Self {
        let mut coeffs = vec![R::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> R {
        self.coeffs.get(power).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    /// Horner evaluation at a point of the base ring.
    pub fn eval(&self, t: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c).collect())
    }

    fn zip_with(mut self, rhs: &Self, f: impl Fn(&mut R, &R)) -> Self {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), R::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            f(a, b);
        }
        Self::new(self.coeffs)
    }
}

/// `deg p` as used by the degree bounds; −1 for the zero polynomial.
pub fn param_degree<R: Ring>(p: &ParamPoly<R>) -> isize {
    p.degree()
}

/// Constant embedding of the base field.
pub fn embed_constant(c: &ExactComplex) -> ParamPoly<ExactComplex> {
    ParamPoly::constant(c.clone())
}

impl<R: Ring> fmt::Debug for ParamPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})t")?,
                _ => write!(f, "({c:?})t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> Ring for ParamPoly<R> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(R::from_i64(v))
    }
    /// Only nonzero constants are units.
    fn try_inv(&self) -> Result<Self> {
        match self.degree() {
            -1 => Err(Error::DivisionByZero),
            0 => Ok(Self::constant(self.coeffs[0].try_inv()?)),
            d => Err(Error::NonUnitDivisor(d)),
        }
    }
    fn is_exact() -> bool {
        R::is_exact()
    }
}

impl ExactScalar for ParamPoly<ExactComplex> {
    fn embed(c: &ExactComplex) -> Self {
        embed_constant(c)
    }
}

impl<'a, R: Ring> Add<&'a ParamPoly<R>> for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn add(self, rhs: &'a ParamPoly<R>) -> ParamPoly<R> {
        self.zip_with(rhs, |a, b| *a += b)
    }
}

impl<R: Ring> Add for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn add(self, rhs: ParamPoly<R>) -> ParamPoly<R> {
        self + &rhs
    }
}

impl<'a, R: Ring> AddAssign<&'a ParamPoly<R>> for ParamPoly<R> {
    fn add_assign(&mut self, rhs: &'a ParamPoly<R>) {
        *self = std::mem::replace(self, Self::zero()) + rhs;
    }
}

impl<'a, R: Ring> Sub<&'a ParamPoly<R>> for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn sub(self, rhs: &'a ParamPoly<R>) -> ParamPoly<R> {
        self.zip_with(rhs, |a, b| *a -= b)
    }
}

impl<R: Ring> Sub for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn sub(self, rhs: ParamPoly<R>) -> ParamPoly<R> {
        self - &rhs
    }
}

impl<'a, R: Ring> SubAssign<&'a ParamPoly<R>> for ParamPoly<R> {
    fn sub_assign(&mut self, rhs: &'a ParamPoly<R>) {
        *self = std::mem::replace(self, Self::zero()) - rhs;
    }
}

impl<'a, R: Ring> Mul<&'a ParamPoly<R>> for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn mul(self, rhs: &'a ParamPoly<R>) -> ParamPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a.clone() * b);
                }
            }
        }
        Self::new(out)
    }
}

impl<R: Ring> Mul for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn mul(self, rhs: ParamPoly<R>) -> ParamPoly<R> {
        self * &rhs
    }
}

impl<R: Ring> Neg for ParamPoly<R> {
    type Output = ParamPoly<R>;
    fn neg(self) -> ParamPoly<R> {
        Self { coeffs: self.coeffs.into_iter().map(Neg::neg).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{ring_arithmetic, ArithOp};
    use proptest::prelude::*;

    type P = ParamPoly<ExactComplex>;

    fn c(v: i64) -> ExactComplex {
        ExactComplex::from_i64(v)
    }

    #[test]
    fn t_times_t_is_t_squared() {
        let p = ring_arithmetic(&P::t(), &P::t(), ArithOp::Mul).unwrap();
        assert_eq!(p, P::monomial(c(1), 2));
    }

    #[test]
    fn degrees() {
        let p = P::new(vec![c(1), c(0), c(1)]);
        assert_eq!(param_degree(&p), 2);
        assert_eq!(param_degree(&P::zero()), -1);
        let q = P::t() * &(P::t() - &P::one());
        assert_eq!(param_degree(&q), 2);
        assert_eq!(param_degree(&P::new(vec![c(3), c(0), c(0)])), 0);
    }

    #[test]
    fn embedding_basics() {
        assert_eq!(embed_constant(&c(1)), P::one());
        assert_eq!(param_degree(&embed_constant(&c(0))), -1);
    }

    #[test]
    fn only_constants_divide() {
        assert_eq!(P::t().try_inv().unwrap_err(), Error::NonUnitDivisor(1));
        assert_eq!(P::zero().try_inv().unwrap_err(), Error::DivisionByZero);
        let half = P::constant(c(2)).try_inv().unwrap();
        assert_eq!(half, P::constant(ExactComplex::from_ratio(1, 2)));
        let q = ring_arithmetic(&(P::t() * &P::constant(c(4))), &P::constant(c(2)), ArithOp::Div).unwrap();
        assert_eq!(q, P::monomial(c(2), 1));
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-5i64..5, -5i64..5), 0..6)
            .prop_map(|v| P::new(v.into_iter().map(|(a, b)| ExactComplex::gaussian(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn degree_is_additive(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!((p.clone() * &q).degree(), p.degree() + q.degree());
        }

        #[test]
        fn embedding_is_multiplicative(a in (-9i64..9, 1i64..9), b in (-9i64..9, 1i64..9)) {
            let x = ExactComplex::from_ratio(a.0, a.1);
            let y = ExactComplex::from_ratio(b.0, b.1);
            prop_assert_eq!(embed_constant(&x) * &embed_constant(&y), embed_constant(&(x.clone() * &y)));
            prop_assert_eq!(embed_constant(&x) + &embed_constant(&y), embed_constant(&(x + &y)));
        }

        #[test]
        fn evaluation_is_a_homomorphism(p in arb_poly(), q in arb_poly(), t in -4i64..4) {
            let t = c(t);
            prop_assert_eq!((p.clone() * &q).eval(&t), p.eval(&t) * &q.eval(&t));
        }
    }
}
