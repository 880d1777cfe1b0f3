//! Dense univariate polynomials over the rationals.
//!
//! The zero polynomial is the empty coefficient vector; every other value has
//! a nonzero leading coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, ComplexF, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `k`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Poly::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            &acc * &Poly::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lead) if !lead.is_one() => self.scale(&lead.recip()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: ComplexF) -> ComplexF {
        self.to_f64()
            .iter()
            .rev()
            .fold(ComplexF::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::scalar::to_f64).collect()
    }

    /// Euclidean division: `self = den * quot + rem` with `deg(rem) < deg(den)`.
    pub fn divrem(&self, den: &Poly) -> Result<(Poly, Poly)> {
        let den_deg = den.degree().ok_or(Error::DivisionByZero)?;
        let Some(num_deg) = self.degree().filter(|&d| d >= den_deg) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let lead_inv = den.coeffs[den_deg].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); num_deg - den_deg + 1];
        for shift in (0..=num_deg - den_deg).rev() {
            let top = &rem[shift + den_deg];
            if top.is_zero() {
                continue;
            }
            let factor = top * &lead_inv;
            for (i, d) in den.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * d;
            }
            quot[shift] = factor;
        }
        rem.truncate(den_deg);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, den: &Poly) -> Result<Poly> {
        self.divrem(den).map(|(_, r)| r)
    }

    /// Exact quotient; fails if the division leaves a remainder.
    pub fn exact_div(&self, den: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal(format!("{den} does not divide {self}")))
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Yun's square-free decomposition over a field of characteristic zero.
    ///
    /// Returns `(factor, multiplicity)` pairs with monic, square-free, pairwise
    /// coprime factors in increasing multiplicity; their product is the monic
    /// part of `self`.
    pub fn square_free_decompose(&self) -> Result<Vec<(Poly, usize)>> {
        if self.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(
                "square-free decomposition needs a non-constant polynomial".into(),
            ));
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let c = df.exact_div(&a0)?;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut multiplicity = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d)?;
            let next_b = b.exact_div(&a)?;
            let c = d.exact_div(&a)?;
            d = &c - &next_b.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, multiplicity));
            }
            b = next_b;
            multiplicity += 1;
        }
        Ok(out)
    }

    /// `k^n mod q`, by left-to-right square-and-multiply in `Q[k]/(q)`.
    pub fn modpow(n: u64, q: &Poly) -> Result<Poly> {
        Self::modpow_counted(n, q).map(|(v, _)| v)
    }

    /// Like [`Poly::modpow`], also returning the number of quotient-ring
    /// multiplications performed (squarings plus multiplications by `k`).
    pub fn modpow_counted(n: u64, q: &Poly) -> Result<(Poly, usize)> {
        if q.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidModulus);
        }
        let q = q.monic();
        if n == 0 {
            return Ok((Poly::one().rem(&q)?, 0));
        }
        let k = Poly::x().rem(&q)?;
        let mut acc = k.clone();
        let mut mults = 0;
        for bit in (0..63 - n.leading_zeros()).rev() {
            acc = (&acc * &acc).rem(&q)?;
            mults += 1;
            if (n >> bit) & 1 == 1 {
                acc = (&acc * &k).rem(&q)?;
                mults += 1;
            }
        }
        Ok((acc, mults))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `k^3 + 4*k^2 + 3*k - 8`: descending powers, zero terms omitted, unit
/// coefficients omitted on powers of `k`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let var = match power {
                0 => String::new(),
                1 => "k".to_string(),
                p => format!("k^{p}"),
            };
            if power == 0 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{magnitude}*{var}")?;
            }
        }
        Ok(())
    }
}
