//! Fixed inputs shared by the criterion benchmarks.

use matpow_core::scalar::frac;
use matpow_core::Mat;

/// 3x3 integer matrix with minimal polynomial `k^2 + 2k - 15`.
pub fn split_minpoly() -> Mat {
    Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).expect("square")
}

/// 3x3 matrix whose minimal and characteristic polynomials coincide.
pub fn full_minpoly() -> Mat {
    Mat::from_i64_rows(&[[-4, 2, 0], [-2, -1, 0], [0, 0, 1]]).expect("square")
}

/// Row-stochastic chain with a complex eigenvalue pair of modulus 1/3.
pub fn stochastic() -> Mat {
    Mat::from_rows(vec![
        vec![frac(0, 1), frac(1, 1), frac(0, 1)],
        vec![frac(0, 1), frac(2, 3), frac(1, 3)],
        vec![frac(1, 3), frac(0, 1), frac(2, 3)],
    ])
    .expect("square")
}

/// Deterministic dense `dim x dim` integer matrix with entries in `[-3, 3]`.
pub fn dense(dim: usize) -> Mat {
    let rows: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| ((i * 7 + j * 3 + i * j) % 7) as i64 - 3).collect())
        .collect();
    Mat::from_i64_rows(&rows).expect("square")
}
