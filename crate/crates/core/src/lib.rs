//! Exact linear algebra for matrix powers.
//!
//! The crate computes the minimal polynomial of a rational matrix by row
//! reducing the stack of its vectorized powers, then uses the remainder of
//! `k^n` modulo that polynomial to get `A^n` either exactly (square-and-multiply
//! in the quotient ring) or symbolically, as a sum of `n^(j) * lambda^(n-j)`
//! terms over the eigenvalues.
//!
//! ```
//! use matpow_core::{minimal_polynomial, matrix_power, Mat, PowerMethod};
//!
//! let a = Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).unwrap();
//! let report = minimal_polynomial(&a).unwrap();
//! assert_eq!(report.q.to_string(), "k^2 + 2*k - 15");
//!
//! let cube = matrix_power(&a, 3, PowerMethod::ViaMinpoly).unwrap();
//! assert_eq!(cube, Mat::from_i64_rows(&[[-87, 114, 0], [38, -11, 0], [0, 0, 27]]).unwrap());
//! ```

pub mod closed_form;
pub mod densemat;
mod error;
pub mod minpoly;
pub mod poly;
pub mod quotient_pow;
mod rational;
pub mod scalar;

pub use closed_form::{
    build_interpolation_system, closed_form, closed_form_with, eval_closed_form, find_roots,
    markov_limit, BasisFunction, ClosedForm, InterpolationSystem, Modulus, Root, RootKind, Term,
    Trig,
};
pub use densemat::{rref, Grid, Mat, RrefResult};
pub use error::{Error, Result};
pub use minpoly::{build_power_stack, charpoly, minimal_polynomial, MinPolyReport};
pub use poly::Poly;
pub use quotient_pow::{
    bench_power_methods, bench_power_methods_with, bench_to_csv, matrix_power, BenchRow,
    PowerMethod, QuotientPower,
};
pub use scalar::{parse_rational, rational_arith, to_polar, ArithOp, ComplexF, Rational};
