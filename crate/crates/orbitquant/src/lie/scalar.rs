//! Coefficient rings used by the exact and floating algebra.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.25"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    if let Ok(r) = t.parse::<Rat>() {
        if r.denom().is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(r);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if let Some((ip, fp)) = body.split_once('.') {
        let ok = !(ip.is_empty() && fp.is_empty())
            && ip.chars().all(|c| c.is_ascii_digit())
            && fp.chars().all(|c| c.is_ascii_digit());
        if ok {
            let digits = format!("{ip}{fp}");
            let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
            let den = num_traits::pow(BigInt::from(10), fp.len());
            let r = Rat::new(num, den);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Parse(format!("not a rational literal: {t:?}")))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Commutative ring with an embedding of the rationals.
pub trait Ring:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn is_zero(&self) -> bool;

    fn scale(&self, r: &Rat) -> Self {
        Self::from_rat(r) * self.clone()
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rat(r: &Rat) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// `r^k` for an exact rational and a signed integer exponent.
pub fn rat_pow(r: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        num_traits::pow(r.recip(), (-k) as usize)
    }
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
