//! Exact coefficient fields.
//!
//! Everything downstream is generic over [`Scalar`], a field containing the
//! imaginary unit. The canonical instance is [`GaussianRational`], the field
//! ℚ(i) with arbitrary-precision rational parts. `Complex<BigRational>` is
//! also a `Scalar`; it is used to cross-check results computed with the
//! canonical type.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A commutative field of exact scalars containing `i`.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn imag_unit() -> Self;

    /// The rational number `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn checked_inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let inv = rhs.checked_inv().ok_or(Error::DivisionByZero)?;
        let mut out = self.clone();
        out *= &inv;
        Ok(out)
    }

    /// The representative `1 + i` of `√(2i)`.
    fn sqrt_two_i() -> Self {
        Self::one() + Self::imag_unit()
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }
}

/// An element `re + im·i` of ℚ(i).
///
/// Both parts are stored as reduced `BigRational`s, so equal values have
/// identical representations and derived `Eq`/`Hash` are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        GaussianRational { re, im }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(ratio(re.0, re.1), ratio(im.0, im.1))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn try_inv(&self) -> Result<Self> {
        self.checked_inv().ok_or(Error::DivisionByZero)
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Scalar::checked_div(self, rhs)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussianRational::new(re, im)
    }
}

/// Panics on division by zero, like the primitive types; use
/// [`GaussianRational::try_div`] for the fallible form.
impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        GaussianRational::try_div(&self, &rhs).expect("division by zero")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        if rhs.im.is_zero() {
            self.re *= &rhs.re;
            self.im *= &rhs.re;
        } else {
            *self = &*self * rhs;
        }
    }
}

impl Scalar for GaussianRational {
    fn imag_unit() -> Self {
        Self::i()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(ratio(num, den), BigRational::zero())
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// `√(2i)`, represented exactly as `1 + i`.
pub fn sqrt_two_i() -> GaussianRational {
    GaussianRational::sqrt_two_i()
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: `a/b` rationals, `i` suffix on the imaginary part,
/// unit imaginary parts written as `i`/`-i`, e.g. `-1/4+3/8i`, `-2i`, `0`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = self.re.is_zero();
        if self.im.is_zero() {
            return fmt_rational(f, &self.re);
        }
        if !re_zero {
            fmt_rational(f, &self.re)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.im.is_one() {
            f.write_str("i")
        } else if (-self.im.clone()).is_one() {
            f.write_str("-i")
        } else {
            fmt_rational(f, &self.im)?;
            f.write_str("i")
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianRational({self})")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_imag(s: &str) -> Result<BigRational> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(s),
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::new(parse_rational(&s)?, BigRational::zero()));
        };
        // Split at the last sign that is not leading.
        let split = body
            .char_indices()
            .rev()
            .find(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx);
        match split {
            Some(idx) => {
                let re = parse_rational(&body[..idx])?;
                let im = parse_imag(&body[idx..])?;
                Ok(Self::new(re, im))
            }
            None => Ok(Self::new(BigRational::zero(), parse_imag(body)?)),
        }
    }
}

impl Scalar for Complex<BigRational> {
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(ratio(num, den), BigRational::zero())
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Complex::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl From<&GaussianRational> for Complex<BigRational> {
    fn from(z: &GaussianRational) -> Self {
        Complex::new(z.re.clone(), z.im.clone())
    }
}

impl From<&Complex<BigRational>> for GaussianRational {
    fn from(z: &Complex<BigRational>) -> Self {
        GaussianRational::new(z.re.clone(), z.im.clone())
    }
}
