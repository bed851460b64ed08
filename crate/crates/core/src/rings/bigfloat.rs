use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use astro_float::BigFloat;

use super::{ExactComplex, Field, Ring};
use crate::error::{Error, Result};

/// Smallest working precision accepted for big floats, in bits.
pub const MIN_PRECISION: usize = 53;

/// Real big-float helpers on top of `astro_float`.
pub mod real {
    use std::cell::RefCell;
    use std::cmp::Ordering;

    pub use astro_float::BigFloat;
    use astro_float::{Consts, Radix, RoundingMode, Sign, Word};
    use num_bigint::{BigInt, BigUint};
    use num_rational::BigRational;
    use num_traits::{Signed, ToPrimitive, Zero};

    use crate::error::{Error, Result};

    pub const RM: RoundingMode = RoundingMode::ToEven;

    /// astro-float works in whole 64-bit words and yields NaN below one word.
    pub fn w(bits: usize) -> usize {
        bits.max(64)
    }

    thread_local! {
        static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache allocation"));
    }

    pub fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
        CONSTS.with(|c| f(&mut c.borrow_mut()))
    }

    pub fn zero(bits: usize) -> BigFloat {
        BigFloat::from_i64(0, w(bits))
    }

    pub fn from_i64(v: i64, bits: usize) -> BigFloat {
        BigFloat::from_i64(v, w(bits))
    }

    pub fn from_bigint(v: &BigInt, bits: usize) -> BigFloat {
        if v.is_zero() {
            return zero(bits);
        }
        let words: Vec<Word> = v.magnitude().to_u64_digits();
        let sign = if v.is_negative() { Sign::Neg } else { Sign::Pos };
        let exact = BigFloat::from_words(&words, sign, (words.len() * 64) as astro_float::Exponent);
        let mut out = exact;
        out.set_precision(w(bits), RM).expect("precision change");
        out
    }

    /// Correctly rounded up to one final division.
    pub fn from_rational(q: &BigRational, bits: usize) -> BigFloat {
        let work = bits + 64;
        let n = from_bigint(q.numer(), work);
        let d = from_bigint(q.denom(), work);
        n.div(&d, w(bits), RM)
    }

    /// Exact dyadic value of a finite big float.
    pub fn to_rational(x: &BigFloat) -> Option<BigRational> {
        if x.is_zero() {
            return Some(BigRational::zero());
        }
        let (words, _, sign, exp, _) = x.as_raw_parts()?;
        let mantissa = BigInt::from(BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        ));
        let shift = exp as i64 - 64 * words.len() as i64;
        let mut value = BigRational::from_integer(mantissa);
        let two = BigRational::from_integer(BigInt::from(2));
        let scale = num_traits::pow::pow(two, shift.unsigned_abs() as usize);
        if shift >= 0 {
            value *= scale;
        } else {
            value /= scale;
        }
        if sign == Sign::Neg {
            value = -value;
        }
        Some(value)
    }

    pub fn to_f64(x: &BigFloat) -> f64 {
        to_rational(x).and_then(|q| q.to_f64()).unwrap_or(f64::NAN)
    }

    pub fn pow2(exp: i64, bits: usize) -> BigFloat {
        let mut x = BigFloat::from_i64(1, w(bits));
        x.set_exponent(exp as astro_float::Exponent + 1);
        x
    }

    pub fn pi(bits: usize) -> BigFloat {
        with_consts(|cc| cc.pi(w(bits), RM))
    }

    pub fn sin(x: &BigFloat, bits: usize) -> BigFloat {
        with_consts(|cc| x.sin(w(bits), RM, cc))
    }

    pub fn cos(x: &BigFloat, bits: usize) -> BigFloat {
        with_consts(|cc| x.cos(w(bits), RM, cc))
    }

    pub fn ln(x: &BigFloat, bits: usize) -> BigFloat {
        with_consts(|cc| x.ln(w(bits), RM, cc))
    }

    pub fn exp(x: &BigFloat, bits: usize) -> BigFloat {
        with_consts(|cc| x.exp(w(bits), RM, cc))
    }

    pub fn sqrt(x: &BigFloat, bits: usize) -> BigFloat {
        x.sqrt(w(bits), RM)
    }

    pub fn add(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
        a.add(b, w(bits), RM)
    }

    pub fn sub(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
        a.sub(b, w(bits), RM)
    }

    pub fn mul(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
        a.mul(b, w(bits), RM)
    }

    pub fn div(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
        a.div(b, w(bits), RM)
    }

    pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            Some(_) => Ordering::Greater,
            None => panic!("comparison with NaN"),
        }
    }

    pub fn min(a: BigFloat, b: BigFloat) -> BigFloat {
        if cmp(&a, &b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    pub fn max(a: BigFloat, b: BigFloat) -> BigFloat {
        if cmp(&a, &b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    /// Distance from `x` to the nearest integer.
    pub fn dist_to_int(x: &BigFloat, bits: usize) -> BigFloat {
        let half = from_rational(&BigRational::new(1.into(), 2.into()), bits);
        let shifted = add(x, &half, bits);
        let nearest = shifted.floor();
        sub(x, &nearest, bits).abs()
    }

    /// `|e^{2πiφ} − 1| = 2|sin(πφ)|`, evaluated on the reduced argument.
    pub fn chord(phi: &BigFloat, bits: usize) -> BigFloat {
        let d = dist_to_int(phi, bits + 16);
        let s = sin(&mul(&pi(bits + 16), &d, bits + 16), bits + 16);
        let mut out = mul(&from_i64(2, bits), &s.abs(), bits);
        out.set_precision(w(bits), RM).expect("precision change");
        out
    }

    pub fn parse_decimal(s: &str, bits: usize) -> Result<BigFloat> {
        parse_radix(s, Radix::Dec, bits)
    }

    fn parse_radix(s: &str, radix: Radix, bits: usize) -> Result<BigFloat> {
        let x = with_consts(|cc| BigFloat::parse(s.trim(), radix, w(bits), RM, cc));
        if x.is_nan() || x.is_inf() {
            return Err(Error::parse("number", format!("cannot parse {s:?} as a finite number")));
        }
        Ok(x)
    }

    /// Exact hexadecimal rendering, `[-]0x<mantissa>_e<exp>`.
    pub fn format_hex(x: &BigFloat) -> String {
        if x.is_zero() {
            return "0x0".into();
        }
        let body = with_consts(|cc| x.abs().format(Radix::Hex, RM, cc)).expect("finite value formats");
        if x.is_negative() {
            format!("-0x{body}")
        } else {
            format!("0x{body}")
        }
    }

    pub fn format_decimal(x: &BigFloat) -> String {
        if x.is_zero() {
            return "0".into();
        }
        with_consts(|cc| x.format(Radix::Dec, RM, cc)).expect("finite value formats")
    }

    /// Reads either a hex string from [`format_hex`] or a decimal literal.
    pub fn parse_any(s: &str, bits: usize) -> Result<BigFloat> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let x = match body.strip_prefix("0x") {
            Some(hex) if hex == "0" => zero(bits),
            Some(hex) => parse_radix(hex, Radix::Hex, bits)?,
            None => return parse_decimal(t, bits),
        };
        Ok(if neg { -x } else { x })
    }
}

/// Complex big float. Results of binary operations carry the larger operand precision.
#[derive(Clone)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    bits: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, bits: usize) -> Self {
        let bits = bits.max(MIN_PRECISION);
        let mut re = re;
        let mut im = im;
        re.set_precision(real::w(bits), real::RM).expect("precision change");
        im.set_precision(real::w(bits), real::RM).expect("precision change");
        Self { re, im, bits }
    }

    pub fn zero_with(bits: usize) -> Self {
        Self::new(real::zero(bits), real::zero(bits), bits)
    }

    pub fn from_exact(c: &ExactComplex, bits: usize) -> Self {
        Self::new(real::from_rational(&c.re, bits), real::from_rational(&c.im, bits), bits)
    }

    /// `e^{2πiφ}` for real `φ`.
    pub fn unit(phi: &BigFloat, bits: usize) -> Self {
        let w = bits + 16;
        let angle = real::mul(&real::mul(&real::from_i64(2, w), &real::pi(w), w), phi, w);
        Self::new(real::cos(&angle, w), real::sin(&angle, w), bits)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.bits
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        Self::new(self.re.clone(), self.im.clone(), bits)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.bits;
        real::add(&real::mul(&self.re, &self.re, p), &real::mul(&self.im, &self.im, p), p)
    }

    pub fn abs(&self) -> BigFloat {
        real::sqrt(&self.norm_sqr(), self.bits)
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone(), bits: self.bits }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.bits + 16;
        let r = real::sqrt(&self.norm_sqr(), p);
        let two = real::from_i64(2, p);
        // Rounding can push r ∓ re slightly below zero.
        let half = |x: BigFloat| real::sqrt(&real::max(real::zero(p), real::div(&x, &two, p)), p);
        let a = half(real::add(&r, &self.re, p));
        let b = half(real::sub(&r, &self.re, p));
        let b = if self.im.is_negative() { -b } else { b };
        Self::new(a, b, self.bits)
    }

    pub fn ln_abs(&self) -> BigFloat {
        real::div(&real::ln(&self.norm_sqr(), self.bits), &real::from_i64(2, self.bits), self.bits)
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        let p = self.bits;
        Self::new(real::mul(&self.re, k, p), real::mul(&self.im, k, p), p)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (real::to_f64(&self.re), real::to_f64(&self.im))
    }

    fn combine(&self, rhs: &Self) -> usize {
        self.bits.max(rhs.bits)
    }
}

impl PartialEq for BigComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)@{}", real::format_decimal(&self.re), real::format_decimal(&self.im), self.bits)
    }
}

impl Ring for BigComplex {
    fn zero() -> Self {
        Self::zero_with(MIN_PRECISION)
    }
    fn one() -> Self {
        Self::new(real::from_i64(1, MIN_PRECISION), real::zero(MIN_PRECISION), MIN_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Self::new(real::from_i64(v, 64), real::zero(64), 64)
    }
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.bits;
        let n = self.norm_sqr();
        Ok(Self::new(real::div(&self.re, &n, p), -real::div(&self.im, &n, p), p))
    }
    fn is_exact() -> bool {
        false
    }
}

impl Field for BigComplex {}

impl<'a> Add<&'a BigComplex> for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.combine(rhs);
        BigComplex::new(real::add(&self.re, &rhs.re, p), real::add(&self.im, &rhs.im, p), p)
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: BigComplex) -> BigComplex {
        self + &rhs
    }
}

impl<'a> AddAssign<&'a BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &'a BigComplex) {
        *self = self.clone() + rhs;
    }
}

impl<'a> Sub<&'a BigComplex> for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.combine(rhs);
        BigComplex::new(real::sub(&self.re, &rhs.re, p), real::sub(&self.im, &rhs.im, p), p)
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: BigComplex) -> BigComplex {
        self - &rhs
    }
}

impl<'a> SubAssign<&'a BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &'a BigComplex) {
        *self = self.clone() - rhs;
    }
}

impl<'a> Mul<&'a BigComplex> for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.combine(rhs);
        let w = p + 8;
        let re = real::sub(&real::mul(&self.re, &rhs.re, w), &real::mul(&self.im, &rhs.im, w), p);
        let im = real::add(&real::mul(&self.re, &rhs.im, w), &real::mul(&self.im, &rhs.re, w), p);
        BigComplex::new(re, im, p)
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: BigComplex) -> BigComplex {
        self * &rhs
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im, bits: self.bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rel_err(approx: &BigComplex, exact: &ExactComplex) -> f64 {
        let p = approx.precision() + 64;
        let diff = approx.with_precision(p) - &BigComplex::from_exact(exact, p);
        let num = real::to_f64(&diff.abs());
        let den = real::to_f64(&BigComplex::from_exact(exact, p).abs());
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }

    #[test]
    fn rational_round_trip_through_float() {
        let q = BigRational::new((-7).into(), 16.into());
        let x = real::from_rational(&q, 128);
        assert_eq!(real::to_rational(&x).unwrap(), q);
        let big = BigRational::from_integer(num_bigint::BigInt::from(u128::MAX) * 3);
        assert_eq!(real::to_rational(&real::from_rational(&big, 256)).unwrap(), big);
    }

    #[test]
    fn hex_serialization_is_exact() {
        let x = real::div(&real::pi(256), &real::from_i64(-7, 256), 256);
        let s = real::format_hex(&x);
        assert_eq!(real::parse_any(&s, 256).unwrap(), x);
        assert!(real::parse_any("-0x0", 64).unwrap().is_zero());
        assert_eq!(real::to_f64(&real::parse_any("2.5", 64).unwrap()), 2.5);
    }

    #[test]
    fn chord_matches_sine_formula() {
        let bits = 128;
        let phi = real::from_rational(&BigRational::new(1.into(), 6.into()), bits);
        let c = real::to_f64(&real::chord(&phi, bits));
        assert!((c - 1.0).abs() < 1e-15);
        let phi = real::from_rational(&BigRational::new(7.into(), 2.into()), bits);
        assert!((real::to_f64(&real::chord(&phi, bits)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_picks_principal_branch() {
        let z = BigComplex::from_exact(&ExactComplex::gaussian(-4, 0), 128);
        let r = z.sqrt();
        assert!(real::to_f64(r.re()).abs() < 1e-30);
        assert!((real::to_f64(r.im()) - 2.0).abs() < 1e-30);
    }

    fn dyadic() -> impl Strategy<Value = ExactComplex> {
        (-1000i64..1000, 0u32..12, -1000i64..1000, 0u32..12).prop_map(|(a, s, b, t)| {
            ExactComplex::new(
                BigRational::new(a.into(), (1i64 << s).into()),
                BigRational::new(b.into(), (1i64 << t).into()),
            )
        })
    }

    fn rational() -> impl Strategy<Value = ExactComplex> {
        (-1000i64..1000, 1i64..999, -1000i64..1000, 1i64..999)
            .prop_map(|(a, b, c, d)| ExactComplex::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into())))
    }

    proptest! {
        #[test]
        fn float_arithmetic_tracks_exact(a in dyadic(), b in dyadic(), x in rational(), y in rational(), prec in 53usize..300) {
            let bound = 2f64.powi(3 - prec as i32);
            let fa = BigComplex::from_exact(&a, prec);
            let fb = BigComplex::from_exact(&b, prec);
            prop_assert!(rel_err(&(fa.clone() + &fb), &(a.clone() + &b)) <= bound);
            prop_assert!(rel_err(&(fa.clone() - &fb), &(a.clone() - &b)) <= bound);
            let fx = BigComplex::from_exact(&x, prec);
            let fy = BigComplex::from_exact(&y, prec);
            prop_assert!(rel_err(&(fx.clone() * &fy), &(x.clone() * &y)) <= bound);
            if !y.is_zero() {
                prop_assert!(rel_err(&fx.try_div(&fy).unwrap(), &x.try_div(&y).unwrap()) <= bound);
            }
        }

        #[test]
        fn results_carry_max_precision(p in 53usize..200, q in 53usize..200) {
            let a = BigComplex::from_exact(&ExactComplex::from_ratio(1, 3), p);
            let b = BigComplex::from_exact(&ExactComplex::from_ratio(2, 7), q);
            prop_assert_eq!((a * &b).precision(), p.max(q));
        }
    }
}
