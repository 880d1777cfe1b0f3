//! Dense square matrices over the rationals and exact row reduction.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{bit_length, int, to_f64, Rational};

/// Rectangular row-major grid, used for `B`, its reduction and augmented systems.
pub type Grid = Vec<Vec<Rational>>;

/// Square `dim x dim` matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    dim: usize,
    entries: Vec<Rational>,
}

impl Mat {
    pub fn from_rows(rows: Grid) -> Result<Mat> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimMismatch {
                left: format!("{dim} rows"),
                right: format!("row of length {}", bad.len()),
            });
        }
        Ok(Mat {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Mat> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Mat {
        Mat {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Mat {
        let mut m = Mat::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Rational::one();
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Mat {
        let mut m = Mat::zero(values.len());
        for (i, v) in values.iter().enumerate() {
            m.entries[i * m.dim + i] = v.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Grid {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.entries[j * self.dim + i] = self.get(i, j).clone();
            }
        }
        t
    }

    fn check_dim(&self, other: &Mat) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                left: format!("{0}x{0}", self.dim),
                right: format!("{0}x{0}", other.dim),
            })
        }
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        Ok(Mat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Mat) -> Result<Mat> {
        self.check_dim(other)?;
        Ok(Mat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Column-stacking vectorization: column `j` fills slots `j*m .. (j+1)*m`.
    pub fn vec_columns(&self) -> Vec<Rational> {
        (0..self.dim)
            .flat_map(|j| (0..self.dim).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect()
    }

    /// `p(A)` by Horner's rule; the constant term multiplies the identity.
    pub fn eval_poly(&self, p: &Poly) -> Mat {
        let id = Mat::identity(self.dim);
        p.coeffs()
            .iter()
            .rev()
            .fold(Mat::zero(self.dim), |acc, c| &(&acc * self) + &id.scale(c))
    }

    /// Exact inverse via row reduction of `[A | I]`.
    pub fn inverse(&self) -> Result<Mat> {
        let n = self.dim;
        let id = Mat::identity(n);
        let augmented: Grid = self
            .rows()
            .into_iter()
            .zip(id.rows())
            .map(|(mut r, i)| {
                r.extend(i);
                r
            })
            .collect();
        let reduced = rref(&augmented);
        if reduced.pivot_cols.len() < n || reduced.pivot_cols[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Mat::from_rows(reduced.rref.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.dim)
            .map(|r| r.iter().map(to_f64).collect())
            .collect()
    }

    /// Largest numerator or denominator bit length over all entries.
    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(bit_length).max().unwrap_or(0)
    }
}

/// Panics on dimension mismatch; use [`Mat::checked_mul`] for a fallible form.
impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrefResult {
    pub rref: Grid,
    /// Ascending pivot column indices, one per nonzero row.
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form by Gauss-Jordan elimination. The pivot row is the
/// first row at or below the current one with a nonzero entry in the column.
pub fn rref(rows: &[Vec<Rational>]) -> RrefResult {
    let mut m: Grid = rows.to_vec();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n_cols {
        if row == n_rows {
            break;
        }
        let Some(pivot) = (row..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        let inv = m[row][col].recip();
        for x in &mut m[row][col..] {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    RrefResult {
        rref: m,
        rank: pivot_cols.len(),
        pivot_cols,
    }
}
