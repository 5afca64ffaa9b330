//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A complex number with rational real and imaginary parts.
pub type GaussianRational = Complex<BigRational>;

/// Field element usable as a matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;

    /// String form used in exports: "p/q" or "re+im*i" for exact scalars,
    /// shortest round-trip decimal for floats.
    fn to_export_string(&self) -> String;

    fn from_rational(value: Rational) -> Self;
}

impl Scalar for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_export_string(&self) -> String {
        self.to_string()
    }

    fn from_rational(value: Rational) -> Self {
        value
    }
}

impl Scalar for GaussianRational {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_export_string(&self) -> String {
        if self.im.is_zero() {
            return self.re.to_string();
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", self.im)
        };
        if self.re.is_zero() {
            im
        } else if im.starts_with('-') {
            format!("{}{}", self.re, im)
        } else {
            format!("{}+{}", self.re, im)
        }
    }

    fn from_rational(value: Rational) -> Self {
        Complex::new(value, Rational::zero())
    }
}

impl Scalar for f64 {
    fn conj(&self) -> Self {
        *self
    }

    fn to_export_string(&self) -> String {
        format!("{self}")
    }

    fn from_rational(value: Rational) -> Self {
        to_f64(&value)
    }
}

impl Scalar for Complex<f64> {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_export_string(&self) -> String {
        format!("{}{:+}*i", self.re, self.im)
    }

    fn from_rational(value: Rational) -> Self {
        Complex::new(to_f64(&value), 0.0)
    }
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn gaussian(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// Parses "p/q", "p", or a terminating decimal such as "0.125".
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let err = || Error::ScalarSyntax {
        input: input.to_string(),
    };
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).map_err(|_| err())?
        };
        let frac = BigInt::from_str(frac_part).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
        let magnitude = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Rational::from_str(s).map_err(|_| err())
}

/// Parses "a", "a+b*i", "a-b*i", "b*i", "i", "-i" with rational a, b.
pub fn parse_gaussian(input: &str) -> Result<GaussianRational> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::ScalarSyntax {
        input: input.to_string(),
    };
    if !s.ends_with('i') {
        return Ok(GaussianRational::from_rational(parse_rational(&s)?));
    }
    let body = &s[..s.len() - 1];
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(idx, _)| idx)
        .filter(|&idx| !body[..idx].ends_with('/'))
        .last();
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let im_str = im_str.trim_end_matches('*');
    let im = match im_str {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other).map_err(|_| err())?,
    };
    let re = if re_str.is_empty() {
        Rational::zero()
    } else {
        parse_rational(re_str).map_err(|_| err())?
    };
    Ok(gaussian(re, im))
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let numer = value.numer().to_biguint()?;
    let denom = value.denom().to_biguint()?;
    let root = |n: &BigUint| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    let (p, q) = (root(&numer)?, root(&denom)?);
    Some(Rational::new(BigInt::from(p), BigInt::from(q)))
}

/// Squared modulus re² + im².
pub fn norm_sqr(value: &GaussianRational) -> Rational {
    &value.re * &value.re + &value.im * &value.im
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
