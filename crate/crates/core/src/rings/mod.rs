//! Coefficient rings for jets.
//!
//! Three substrates are provided: [`ExactComplex`] (Gaussian rationals),
//! [`BigComplex`] (arbitrary precision floats) and [`ParamPoly`], polynomials
//! in one parameter `t` over either of them. All jet code is generic over the
//! [`Ring`] trait.

mod bigfloat;
mod exact;
mod param;
pub mod serial;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub use bigfloat::{real, BigComplex, MIN_PRECISION};
pub use exact::ExactComplex;
pub use param::{embed_constant, param_degree, ParamPoly};

use crate::error::{Error, Result};

/// Commutative ring with unit, as needed by jet arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, if it exists in the ring.
    fn try_inv(&self) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn try_div(&self, divisor: &Self) -> Result<Self> {
        Ok(self.clone() * &divisor.try_inv()?)
    }

    /// Whether equality in this ring is decided exactly.
    fn is_exact() -> bool;
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {}

/// Rings containing the Gaussian rationals, used by the exact solvers.
pub trait ExactScalar: Ring {
    fn embed(c: &ExactComplex) -> Self;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ring_arithmetic<R: Ring>(a: &R, b: &R, op: ArithOp) -> Result<R> {
    Ok(match op {
        ArithOp::Add => a.clone() + b,
        ArithOp::Sub => a.clone() - b,
        ArithOp::Mul => a.clone() * b,
        ArithOp::Div => a.try_div(b)?,
    })
}

pub fn pow<R: Ring>(base: &R, mut exp: u64) -> R {
    let mut acc = R::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * &sq;
        }
    }
    acc
}

pub(crate) fn check_nonzero<R: Ring>(d: &R) -> Result<()> {
    if d.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(())
    }
}
