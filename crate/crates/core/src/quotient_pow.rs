//! Exact `A^n` through the remainder `v(k) = k^n mod q(k)`: since `q(A) = 0`,
//! `A^n = v(A)`. Two brute-force methods are kept alongside as oracles.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::densemat::Mat;
use crate::error::{Error, Result};
use crate::minpoly::{charpoly, minimal_polynomial};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PowerMethod {
    ViaMinpoly,
    ViaCharpoly,
    BinaryMatrix,
    Naive,
}

impl PowerMethod {
    pub const ALL: [PowerMethod; 4] = [
        PowerMethod::ViaMinpoly,
        PowerMethod::ViaCharpoly,
        PowerMethod::BinaryMatrix,
        PowerMethod::Naive,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            PowerMethod::ViaMinpoly => "via_minpoly",
            PowerMethod::ViaCharpoly => "via_charpoly",
            PowerMethod::BinaryMatrix => "binary_matrix",
            PowerMethod::Naive => "naive",
        }
    }
}

impl fmt::Display for PowerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PowerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PowerMethod::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown power method {s:?}")))
    }
}

/// A matrix paired with an annihilating polynomial, ready to raise to any power.
#[derive(Debug, Clone)]
pub struct QuotientPower {
    a: Mat,
    modulus: Poly,
}

impl QuotientPower {
    pub fn with_minpoly(a: &Mat) -> Result<Self> {
        Ok(QuotientPower {
            a: a.clone(),
            modulus: minimal_polynomial(a)?.q,
        })
    }

    pub fn with_charpoly(a: &Mat) -> Self {
        QuotientPower {
            a: a.clone(),
            modulus: charpoly(a),
        }
    }

    /// Uses `modulus` as given; it must annihilate `a` for the result to be `A^n`.
    pub fn with_modulus(a: &Mat, modulus: Poly) -> Result<Self> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(QuotientPower {
            a: a.clone(),
            modulus,
        })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The remainder `v(k) = k^n mod modulus`.
    pub fn remainder(&self, n: u64) -> Result<Poly> {
        Poly::modpow(n, &self.modulus)
    }

    pub fn power(&self, n: u64) -> Result<Mat> {
        self.power_counted(n).map(|(m, _)| m)
    }

    /// `A^n` and the number of quotient-ring multiplications used.
    pub fn power_counted(&self, n: u64) -> Result<(Mat, usize)> {
        let (v, mults) = Poly::modpow_counted(n, &self.modulus)?;
        Ok((self.a.eval_poly(&v), mults))
    }
}

pub fn matrix_power(a: &Mat, n: u64, method: PowerMethod) -> Result<Mat> {
    match method {
        PowerMethod::ViaMinpoly => QuotientPower::with_minpoly(a)?.power(n),
        PowerMethod::ViaCharpoly => QuotientPower::with_charpoly(a).power(n),
        PowerMethod::BinaryMatrix => Ok(binary_power(a, n)),
        PowerMethod::Naive => Ok(naive_power(a, n)),
    }
}

fn binary_power(a: &Mat, mut n: u64) -> Mat {
    let mut result = Mat::identity(a.dim());
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

fn naive_power(a: &Mat, n: u64) -> Mat {
    (0..n).fold(Mat::identity(a.dim()), |acc, _| &acc * a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub method: PowerMethod,
    pub n: u64,
    pub wall_ns: u128,
    pub max_bits: u64,
}

/// Times every method at every `n`, after checking that all methods agree.
pub fn bench_power_methods(a: &Mat, n_values: &[u64]) -> Result<Vec<BenchRow>> {
    bench_power_methods_with(a, n_values, &PowerMethod::ALL)
}

/// As [`bench_power_methods`], restricted to `methods`. Rows are sorted by
/// method tag, then by `n`.
pub fn bench_power_methods_with(
    a: &Mat,
    n_values: &[u64],
    methods: &[PowerMethod],
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(n_values.len() * methods.len());
    for &n in n_values {
        let mut reference: Option<(PowerMethod, Mat)> = None;
        for &method in methods {
            let start = Instant::now();
            let result = matrix_power(a, n, method)?;
            let wall_ns = start.elapsed().as_nanos();
            match &reference {
                Some((first, expected)) if *expected != result => {
                    return Err(Error::MismatchDetected {
                        first: first.tag().into(),
                        second: method.tag().into(),
                        n,
                    });
                }
                Some(_) => {}
                None => reference = Some((method, result.clone())),
            }
            rows.push(BenchRow {
                method,
                n,
                wall_ns,
                max_bits: result.max_bits(),
            });
        }
    }
    rows.sort_by(|x, y| x.method.tag().cmp(y.method.tag()).then(x.n.cmp(&y.n)));
    Ok(rows)
}

/// CSV with header `method,n,wall_ns,max_bits`.
pub fn bench_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("method,n,wall_ns,max_bits\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.method, r.n, r.wall_ns, r.max_bits));
    }
    out
}
