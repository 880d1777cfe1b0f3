//! Minimal polynomial by Gauss elimination on the stacked powers of `A`.
//!
//! Column `j` of `B` is `vec(A^j)` for `j = 0..=m`. Because `I, A, ..., A^(r-1)`
//! are independent and `A^r` is not, the reduced form of `B` has its `r`
//! leading ones in the first `r` columns, and column `r` of the reduced form
//! holds the coefficients expressing `A^r` in that basis.

use num_traits::{One, Zero};

use crate::densemat::{rref, Grid, Mat, RrefResult};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPolyReport {
    /// Monic minimal polynomial.
    pub q: Poly,
    /// Degree of `q`, equal to the number of leading ones in `b_hat`.
    pub r: usize,
    pub b_hat: RrefResult,
    /// Characteristic polynomial `det(kI - A)`.
    pub delta: Poly,
}

/// The `m^2 x (m+1)` matrix `B = (vec(I) | vec(A) | ... | vec(A^m))`.
pub fn build_power_stack(a: &Mat) -> Grid {
    let m = a.dim();
    let mut stack = vec![Vec::with_capacity(m + 1); m * m];
    let mut power = Mat::identity(m);
    for j in 0..=m {
        for (row, x) in stack.iter_mut().zip(power.vec_columns()) {
            row.push(x);
        }
        if j < m {
            power = &power * a;
        }
    }
    stack
}

pub fn minimal_polynomial(a: &Mat) -> Result<MinPolyReport> {
    let b_hat = rref(&build_power_stack(a));
    let r = b_hat.rank;
    if b_hat.pivot_cols != (0..r).collect::<Vec<_>>() {
        return Err(Error::Internal(format!(
            "leading ones of the power stack are at {:?}, expected the first {r} columns",
            b_hat.pivot_cols
        )));
    }
    if r > a.dim() {
        return Err(Error::Internal(format!("rank {r} exceeds dimension {}", a.dim())));
    }
    // q(k) = k^r - sum_i B^[i][r] k^i
    let mut coeffs: Vec<Rational> = (0..r).map(|i| -b_hat.rref[i][r].clone()).collect();
    coeffs.push(Rational::one());
    let q = Poly::new(coeffs);
    let delta = charpoly(a);
    Ok(MinPolyReport { q, r, b_hat, delta })
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion:
/// `M_k = A M_(k-1) + c_(m-k+1) I`, `c_(m-k) = -tr(A M_k) / k`.
pub fn charpoly(a: &Mat) -> Poly {
    let m = a.dim();
    let id = Mat::identity(m);
    let mut coeffs = vec![Rational::zero(); m + 1];
    coeffs[m] = Rational::one();
    let mut acc = Mat::zero(m);
    for k in 1..=m {
        acc = &(a * &acc) + &id.scale(&coeffs[m - k + 1]);
        coeffs[m - k] = -(a * &acc).trace() / int(k as i64);
    }
    Poly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use proptest::prelude::*;

    fn grid(rows: &[[i64; 4]]) -> Grid {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn power_stack_of_identity() {
        let stack = build_power_stack(&Mat::identity(2));
        let col: Vec<Rational> = Mat::identity(2).vec_columns();
        assert_eq!(stack.len(), 4);
        for (row, x) in stack.iter().zip(&col) {
            assert_eq!(row, &vec![x.clone(); 3]);
        }
    }

    #[test]
    fn example_one() {
        let a = Mat::from_i64_rows(&[[-4, 2, 0], [-2, -1, 0], [0, 0, 1]]).unwrap();
        let report = minimal_polynomial(&a).unwrap();
        assert_eq!(report.q, Poly::from_i64s(&[-8, 3, 4, 1]));
        assert_eq!(report.r, 3);
        assert_eq!(report.delta, report.q);
        assert_eq!(
            report.b_hat.rref[..3].to_vec(),
            grid(&[[1, 0, 0, 8], [0, 1, 0, -3], [0, 0, 1, -4]])
        );
    }

    #[test]
    fn example_two() {
        let a = Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).unwrap();
        let report = minimal_polynomial(&a).unwrap();
        assert_eq!(report.q, Poly::from_i64s(&[-15, 2, 1]));
        assert_eq!(report.r, 2);
        assert_eq!(
            report.b_hat.rref[..2].to_vec(),
            grid(&[[1, 0, 15, -30], [0, 1, -2, 19]])
        );
        assert!(report.b_hat.rref[2..].iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn identity_and_degenerate() {
        let report = minimal_polynomial(&Mat::identity(3)).unwrap();
        assert_eq!(report.q, Poly::from_i64s(&[-1, 1]));
        assert_eq!(report.r, 1);

        let report = minimal_polynomial(&Mat::zero(3)).unwrap();
        assert_eq!(report.q, Poly::x());

        let one = Mat::from_rows(vec![vec![frac(-2, 3)]]).unwrap();
        let report = minimal_polynomial(&one).unwrap();
        assert_eq!(report.q, Poly::new(vec![frac(2, 3), int(1)]));

        // nilpotent Jordan block: q = k^3
        let j = Mat::from_i64_rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]).unwrap();
        assert_eq!(minimal_polynomial(&j).unwrap().q, Poly::from_i64s(&[0, 0, 0, 1]));
    }

    #[test]
    fn charpoly_examples() {
        let p = Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).unwrap();
        let expected = &(&Poly::from_i64s(&[-3, 1]) * &Poly::from_i64s(&[-3, 1]))
            * &Poly::from_i64s(&[5, 1]);
        assert_eq!(expected, Poly::from_i64s(&[45, -21, -1, 1]));
        assert_eq!(charpoly(&p), expected);
        assert_eq!(charpoly(&Mat::identity(2)), Poly::from_i64s(&[1, -2, 1]));
        let a = Mat::from_i64_rows(&[[1, 2], [3, 4]]).unwrap();
        assert_eq!(charpoly(&a), Poly::from_i64s(&[-2, -5, 1]));
    }

    /// Determinant by cofactor expansion, for the charpoly oracle.
    fn det_poly(m: &[Vec<Poly>]) -> Poly {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut total = Poly::zero();
        for (j, entry) in m[0].iter().enumerate() {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = entry * &det_poly(&minor);
            total = if j % 2 == 0 { &total + &term } else { &total - &term };
        }
        total
    }

    fn int_mat(max_dim: usize, bound: i64) -> impl Strategy<Value = Mat> {
        (1..=max_dim).prop_flat_map(move |d| {
            prop::collection::vec(-bound..=bound, d * d)
                .prop_map(move |v| Mat::from_rows(v.chunks(d).map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn charpoly_matches_cofactor_expansion(a in int_mat(4, 4)) {
            let m = a.dim();
            let k_minus_a: Vec<Vec<Poly>> = (0..m).map(|i| (0..m).map(|j| {
                let diag = if i == j { Poly::x() } else { Poly::zero() };
                &diag - &Poly::constant(a.get(i, j).clone())
            }).collect()).collect();
            let cp = charpoly(&a);
            prop_assert_eq!(&cp, &det_poly(&k_minus_a));
            prop_assert!(a.eval_poly(&cp).is_zero());
        }

        #[test]
        fn minpoly_annihilates_and_divides(a in int_mat(5, 5)) {
            let report = minimal_polynomial(&a).unwrap();
            prop_assert!(report.q.is_monic());
            prop_assert_eq!(report.q.degree(), Some(report.r));
            prop_assert!(a.eval_poly(&report.q).is_zero());
            prop_assert!(report.delta.rem(&report.q).unwrap().is_zero());
            // I, A, ..., A^(r-1) are independent
            let m = a.dim();
            let lower: Grid = build_power_stack(&a).into_iter().map(|row| row[..report.r].to_vec()).collect();
            prop_assert_eq!(rref(&lower).rank, report.r);
            prop_assert!(report.r <= m);
        }

        #[test]
        fn diagonal_oracle(values in prop::collection::vec(-4i64..=4, 1..=5)) {
            let a = Mat::diagonal(&values.iter().map(|&v| int(v)).collect::<Vec<_>>());
            let mut distinct = values.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let expected = Poly::from_roots(&distinct.iter().map(|&v| int(v)).collect::<Vec<_>>());
            prop_assert_eq!(minimal_polynomial(&a).unwrap().q, expected);
        }

        #[test]
        fn similarity_invariance(a in int_mat(4, 3), s_entries in prop::collection::vec(-2i64..=2, 16)) {
            let m = a.dim();
            let s = Mat::from_rows(s_entries[..m * m].chunks(m).map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap();
            let Ok(s_inv) = s.inverse() else { return Ok(()); };
            let similar = &(&s_inv * &a) * &s;
            prop_assert_eq!(minimal_polynomial(&similar).unwrap().q, minimal_polynomial(&a).unwrap().q);
        }
    }
}
