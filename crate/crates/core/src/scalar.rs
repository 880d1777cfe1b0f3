//! Scalars: exact rationals for every exact path, and `f64` complex numbers for
//! eigenvalues that are not rational.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use crate::rational::Rational;

pub type ComplexF = num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rational_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn int(v: i64) -> Rational {
    Rational::from(v)
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`, with an optional leading `-` (ASCII or U+2212).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (negative, body) = if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('-') {
        (true, rest)
    } else {
        (false, trimmed)
    };
    let digits = |s: &str| -> Result<BigInt> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let den = digits(q)?;
            if den.is_zero() {
                return Err(bad());
            }
            Rational::new(digits(p)?, den)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Ok(if negative { -value } else { value })
}

/// Bit length of the larger of numerator and denominator.
pub fn bit_length(x: &Rational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64()
}

/// Polar form `(r, phi)` with `r > 0` and `phi` in `(-pi, pi]`.
pub fn to_polar(z: ComplexF) -> Result<(f64, f64)> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite complex {z}")));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let r = z.re.hypot(z.im);
    let mut phi = z.im.atan2(z.re);
    if phi <= -PI {
        phi = PI;
    }
    Ok((r, phi))
}

/// Exact square root of a nonnegative rational, if it has one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}
