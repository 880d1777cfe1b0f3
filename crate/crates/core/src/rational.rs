//! Arbitrary-precision rationals kept in lowest terms.
//!
//! Matrix powers produce integers with millions of bits while their
//! denominators stay at 1, so every operation short-circuits the integer case
//! and reduction uses Euclid steps until the operands are of similar size.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Invariant: `denom > 0` and `gcd(|numer|, denom) = 1`; zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: BigInt,
    denom: BigInt,
}

/// gcd that first shrinks badly unbalanced operands with remainder steps;
/// the binary gcd underneath is quadratic in the size gap.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    loop {
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_zero() {
            return a;
        }
        if b.is_one() {
            return b;
        }
        if a.bits() <= b.bits() + 64 {
            return a.gcd(&b);
        }
        a %= &b;
    }
}

impl Rational {
    /// Reduces `numer / denom` to lowest terms. Panics if `denom` is zero.
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "rational with zero denominator");
        let (numer, denom) = if denom.is_negative() {
            (-numer, -denom)
        } else {
            (numer, denom)
        };
        if denom.is_one() {
            return Rational { numer, denom };
        }
        if numer.is_zero() {
            return Rational::zero();
        }
        let g = gcd(&numer, &denom);
        if g.is_one() {
            Rational { numer, denom }
        } else {
            Rational {
                numer: numer / &g,
                denom: denom / g,
            }
        }
    }

    pub fn from_integer(numer: BigInt) -> Self {
        Rational {
            numer,
            denom: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integer(&self) -> bool {
        self.denom.is_one()
    }

    /// Truncates toward zero.
    pub fn to_integer(&self) -> BigInt {
        &self.numer / &self.denom
    }

    pub fn is_negative(&self) -> bool {
        self.numer.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.numer.is_positive()
    }

    pub fn abs(&self) -> Rational {
        Rational {
            numer: self.numer.abs(),
            denom: self.denom.clone(),
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Rational {
        assert!(!self.numer.is_zero(), "reciprocal of zero");
        let (numer, denom) = if self.numer.is_negative() {
            (-&self.denom, -&self.numer)
        } else {
            (self.denom.clone(), self.numer.clone())
        };
        Rational { numer, denom }
    }

    pub fn pow(&self, exp: u64) -> Rational {
        // powers of coprime integers stay coprime
        Rational {
            numer: num_traits::pow::Pow::pow(&self.numer, exp),
            denom: num_traits::pow::Pow::pow(&self.denom, exp),
        }
    }

    /// Nearest `f64`, saturating to infinity outside its range.
    pub fn to_f64(&self) -> f64 {
        if self.is_integer() {
            return self.numer.to_f64().unwrap_or(f64::NAN);
        }
        num_rational::Ratio::new_raw(self.numer.clone(), self.denom.clone())
            .to_f64()
            .unwrap_or_else(|| {
                if self.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            })
    }

    fn add_impl(&self, rhs: &Rational, negate_rhs: bool) -> Rational {
        let rn = if negate_rhs { -&rhs.numer } else { rhs.numer.clone() };
        if self.denom.is_one() && rhs.denom.is_one() {
            return Rational::from_integer(&self.numer + rn);
        }
        if self.denom == rhs.denom {
            return Rational::new(&self.numer + rn, self.denom.clone());
        }
        Rational::new(
            &self.numer * &rhs.denom + rn * &self.denom,
            &self.denom * &rhs.denom,
        )
    }

    fn mul_impl(&self, rhs: &Rational) -> Rational {
        if self.denom.is_one() && rhs.denom.is_one() {
            return Rational::from_integer(&self.numer * &rhs.numer);
        }
        if self.numer.is_zero() || rhs.numer.is_zero() {
            return Rational::zero();
        }
        // cross-cancel so the product is already in lowest terms
        let g1 = gcd(&self.numer, &rhs.denom);
        let g2 = gcd(&rhs.numer, &self.denom);
        Rational {
            numer: (&self.numer / &g1) * (&rhs.numer / &g2),
            denom: (&self.denom / &g2) * (&rhs.denom / &g1),
        }
    }

    fn div_impl(&self, rhs: &Rational) -> Rational {
        self.mul_impl(&rhs.recip())
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::from_integer(BigInt::zero())
    }

    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::from_integer(BigInt::one())
    }

    fn is_one(&self) -> bool {
        self.numer.is_one() && self.denom.is_one()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.denom == other.denom {
            return self.numer.cmp(&other.numer);
        }
        (&self.numer * &other.denom).cmp(&(&other.numer * &self.denom))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        crate::scalar::parse_rational(s)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numer: -self.numer,
            denom: self.denom,
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

macro_rules! forward_binop {
    ($Op:ident, $op:ident, $OpAssign:ident, $op_assign:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $Op<&Rational> for &Rational {
            type Output = Rational;
            fn $op(self, $b: &Rational) -> Rational {
                let $a = self;
                $body
            }
        }
        impl $Op<Rational> for &Rational {
            type Output = Rational;
            fn $op(self, rhs: Rational) -> Rational {
                $Op::$op(self, &rhs)
            }
        }
        impl $Op<&Rational> for Rational {
            type Output = Rational;
            fn $op(self, rhs: &Rational) -> Rational {
                $Op::$op(&self, rhs)
            }
        }
        impl $Op<Rational> for Rational {
            type Output = Rational;
            fn $op(self, rhs: Rational) -> Rational {
                $Op::$op(&self, &rhs)
            }
        }
        impl $OpAssign<&Rational> for Rational {
            fn $op_assign(&mut self, rhs: &Rational) {
                *self = $Op::$op(&*self, rhs);
            }
        }
        impl $OpAssign<Rational> for Rational {
            fn $op_assign(&mut self, rhs: Rational) {
                *self = $Op::$op(&*self, &rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, SubAssign, sub_assign, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, MulAssign, mul_assign, |a, b| a.mul_impl(b));
forward_binop!(Div, div, DivAssign, div_assign, |a, b| a.div_impl(b));

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl Rational {
    pub fn signum(&self) -> i32 {
        match self.numer.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
}
