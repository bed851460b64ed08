use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{check_nonzero, ExactScalar, Field, Ring};
use crate::error::{Error, Result};

/// Gaussian rational `re + i·im`. `BigRational` keeps both parts reduced.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(BigRational::new(num.into(), den.into()))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        check_nonzero(self)?;
        if self.im.is_zero() {
            return Ok(Self::from_real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub(crate) fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let den = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"` with `q > 0`, always including the denominator.
pub(crate) fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Reads the [`Display`](fmt::Display) form: `a`, `bi`, `a+bi` or `a-bi` with rational parts.
impl FromStr for ExactComplex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: String| Error::parse("complex", format!("{s:?}: {m}"));
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(Self::from_real).map_err(bad);
        };
        // split at the last sign that is not leading
        let cut = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let (re, im) = match cut {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x.strip_prefix('+').unwrap_or(x),
        };
        Ok(Self::new(parse_rational(re).map_err(bad)?, parse_rational(im).map_err(bad)?))
    }
}

impl Ring for ExactComplex {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Self::from_real(BigRational::from_integer(v.into()))
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for ExactComplex {}

impl ExactScalar for ExactComplex {
    fn embed(c: &ExactComplex) -> Self {
        c.clone()
    }
}

impl<'a> Add<&'a ExactComplex> for ExactComplex {
    type Output = ExactComplex;
    fn add(mut self, rhs: &'a ExactComplex) -> ExactComplex {
        self += rhs;
        self
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: ExactComplex) -> ExactComplex {
        self + &rhs
    }
}

impl<'a> AddAssign<&'a ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &'a ExactComplex) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl<'a> Sub<&'a ExactComplex> for ExactComplex {
    type Output = ExactComplex;
    fn sub(mut self, rhs: &'a ExactComplex) -> ExactComplex {
        self -= rhs;
        self
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: ExactComplex) -> ExactComplex {
        self - &rhs
    }
}

impl<'a> SubAssign<&'a ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, rhs: &'a ExactComplex) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Mul<&'a ExactComplex> for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &'a ExactComplex) -> ExactComplex {
        // Real operands dominate in practice; skip the full Gauss product for them.
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => ExactComplex::from_real(self.re * &rhs.re),
            (true, false) => ExactComplex::new(&self.re * &rhs.re, self.re * &rhs.im),
            (false, true) => ExactComplex::new(self.re * &rhs.re, self.im * &rhs.re),
            (false, false) => ExactComplex::new(
                &self.re * &rhs.re - &self.im * &rhs.im,
                self.re * &rhs.im + self.im * &rhs.re,
            ),
        }
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: ExactComplex) -> ExactComplex {
        self * &rhs
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}
