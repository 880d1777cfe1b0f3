//! Symbolic `A^n` as a function of `n`.
//!
//! Writing `k^n = q(k) t(k) + v(k)` with `v(k) = c_0 + c_1 k + ... + c_(r-1) k^(r-1)`,
//! every root `lambda` of `q` with multiplicity `m` gives `m` equations: the
//! identity and its first `m - 1` derivatives evaluated at `lambda`. The `j`-th
//! derivative of `k^n` is `n^(j) k^(n-j)` with `n^(j)` the falling factorial.
//! For a conjugate pair `r e^(+-i phi)` the two complex equations are replaced
//! by their half-sum and half-difference, so the system stays real. Solving the
//! system expresses each `c_p` as a combination of these basis functions, and
//! `A^n = sum_p c_p(n) A^p` turns that into per-entry terms.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::densemat::Mat;
use crate::error::{Error, Result};
use crate::minpoly::{charpoly, minimal_polynomial};
use crate::poly::Poly;
use crate::scalar::{int, rational_sqrt, to_f64, to_polar, ComplexF, Rational};

const DK_STEP_TOL: f64 = 1e-13;
const DK_MAX_ITER: usize = 500;
const RESIDUAL_TOL: f64 = 1e-10;
const CONJUGATE_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-8;
const UNIT_CIRCLE_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum RootKind {
    Rational(Rational),
    RealIrrational {
        value: f64,
        source_quadratic: Option<Poly>,
    },
    /// `r (cos phi +- i sin phi)` with `0 < phi < pi`; the conjugate is implicit.
    ComplexPair {
        r: f64,
        phi: f64,
        /// `r` itself when `r^2` is a rational square.
        r_exact: Option<Rational>,
        /// `None` when the pair came from the numeric fallback.
        source_quadratic: Option<Poly>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub kind: RootKind,
    pub multiplicity: usize,
}

impl Root {
    /// Number of roots of the modulus this entry stands for (pairs count twice).
    pub fn count(&self) -> usize {
        match self.kind {
            RootKind::ComplexPair { .. } => 2 * self.multiplicity,
            _ => self.multiplicity,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, RootKind::Rational(_))
    }

    pub fn modulus(&self) -> f64 {
        match &self.kind {
            RootKind::Rational(v) => to_f64(v).abs(),
            RootKind::RealIrrational { value, .. } => value.abs(),
            RootKind::ComplexPair { r, .. } => *r,
        }
    }

    /// The root itself (the upper half-plane member for pairs).
    pub fn to_complex(&self) -> ComplexF {
        match &self.kind {
            RootKind::Rational(v) => ComplexF::new(to_f64(v), 0.0),
            RootKind::RealIrrational { value, .. } => ComplexF::new(*value, 0.0),
            RootKind::ComplexPair { r, phi, .. } => ComplexF::from_polar(*r, *phi),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self.kind {
            RootKind::Rational(_) => 0,
            RootKind::RealIrrational { .. } => 1,
            RootKind::ComplexPair { .. } => 2,
        }
    }

    /// Multiplicity descending, then rational < irrational < pair, then value.
    fn order(&self, other: &Root) -> Ordering {
        other
            .multiplicity
            .cmp(&self.multiplicity)
            .then(self.kind_rank().cmp(&other.kind_rank()))
            .then_with(|| match (&self.kind, &other.kind) {
                (RootKind::Rational(a), RootKind::Rational(b)) => a.cmp(b),
                (
                    RootKind::RealIrrational { value: a, .. },
                    RootKind::RealIrrational { value: b, .. },
                ) => a.total_cmp(b),
                (
                    RootKind::ComplexPair { r: r1, phi: p1, .. },
                    RootKind::ComplexPair { r: r2, phi: p2, .. },
                ) => r1.total_cmp(r2).then(p1.total_cmp(p2)),
                _ => Ordering::Equal,
            })
    }
}

/// Roots of `q` with exact multiplicities from its square-free decomposition.
pub fn find_roots(q: &Poly) -> Result<Vec<Root>> {
    let mut roots = Vec::new();
    for (factor, multiplicity) in q.square_free_decompose()? {
        let (rational, rest) = extract_rational_roots(&factor)?;
        roots.extend(rational.into_iter().map(|v| Root {
            kind: RootKind::Rational(v),
            multiplicity,
        }));
        let kinds = match rest.degree() {
            Some(0) | None => Vec::new(),
            Some(1) => vec![RootKind::Rational(-rest.coeff(0) / rest.coeff(1))],
            Some(2) => quadratic_roots(&rest),
            Some(_) => numeric_roots(&rest)?,
        };
        roots.extend(kinds.into_iter().map(|kind| Root { kind, multiplicity }));
    }
    roots.sort_by(Root::order);
    Ok(roots)
}

/// Pulls every rational root out of a square-free `factor`, returning the
/// roots and the monic cofactor.
fn extract_rational_roots(factor: &Poly) -> Result<(Vec<Rational>, Poly)> {
    let mut rest = factor.monic();
    let mut found = Vec::new();
    if rest.coeff(0).is_zero() && rest.degree() > Some(0) {
        found.push(Rational::zero());
        rest = rest.exact_div(&Poly::x())?;
    }
    if rest.degree().unwrap_or(0) == 0 {
        return Ok((found, rest));
    }
    let ints = integer_coefficients(&rest);
    let constant = ints[0].abs();
    let lead = ints[ints.len() - 1].abs();
    let numerators = small_divisors(&constant);
    let denominators = small_divisors(&lead);
    let candidates: Vec<Rational> = match (numerators, denominators) {
        (Some(ps), Some(qs)) => {
            let mut cands: Vec<Rational> = ps
                .iter()
                .flat_map(|p| qs.iter().map(move |q| Rational::new(p.clone(), q.clone())))
                .flat_map(|c| [c.clone(), -c])
                .collect();
            cands.sort();
            cands.dedup();
            cands
        }
        // Coefficients too large to factor by trial division: test rational
        // candidates suggested by the numeric roots instead.
        (_, qs) => numeric_rational_candidates(&rest, qs.as_deref())?,
    };
    for cand in candidates {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        if rest.eval(&cand).is_zero() {
            rest = rest.exact_div(&Poly::new(vec![-cand.clone(), Rational::one()]))?;
            found.push(cand);
        }
    }
    Ok((found, rest))
}

fn integer_coefficients(p: &Poly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Positive divisors of `n` by trial division, or `None` when `n` is too large
/// for that to be cheap.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64().filter(|&v| v <= 1_000_000_000_000)?;
    let mut divs = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            divs.push(d);
            if d != n / d {
                divs.push(n / d);
            }
        }
        d += 1;
    }
    divs.sort_unstable();
    Some(divs.into_iter().map(BigInt::from).collect())
}

fn numeric_rational_candidates(p: &Poly, denominators: Option<&[BigInt]>) -> Result<Vec<Rational>> {
    let one = [BigInt::one()];
    let dens = denominators.unwrap_or(&one);
    let mut out = Vec::new();
    for z in durand_kerner(&p.to_f64())? {
        if z.im.abs() > 1e-6 * z.norm().max(1.0) {
            continue;
        }
        for d in dens {
            let scaled = z.re * d.to_f64().unwrap_or(f64::INFINITY);
            if let Some(num) = BigInt::from_f64(scaled.round()) {
                out.push(Rational::new(num, d.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Roots of a monic, square-free quadratic without rational roots.
fn quadratic_roots(quad: &Poly) -> Vec<RootKind> {
    let b = quad.coeff(1);
    let c = quad.coeff(0);
    let disc = &b * &b - int(4) * &c;
    let bf = to_f64(&b);
    if disc.is_positive() {
        // avoid cancellation: the larger-magnitude root first, the other by Vieta
        let s = to_f64(&disc).sqrt();
        let sign = if bf >= 0.0 { 1.0 } else { -1.0 };
        let big = -(bf + sign * s) / 2.0;
        let small = to_f64(&c) / big;
        let mut pair = [big, small];
        pair.sort_by(f64::total_cmp);
        pair.into_iter()
            .map(|value| RootKind::RealIrrational {
                value,
                source_quadratic: Some(quad.clone()),
            })
            .collect()
    } else {
        let re = -bf / 2.0;
        let im = to_f64(&-disc).sqrt() / 2.0;
        let r_exact = rational_sqrt(&c);
        let (r, phi) = to_polar(ComplexF::new(re, im)).expect("nonzero complex root");
        let r = r_exact.as_ref().map_or(r, to_f64);
        vec![RootKind::ComplexPair {
            r,
            phi,
            r_exact,
            source_quadratic: Some(quad.clone()),
        }]
    }
}

/// Durand-Kerner on a monic polynomial given by ascending `f64` coefficients.
fn durand_kerner(coeffs: &[f64]) -> Result<Vec<ComplexF>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let eval = |z: ComplexF| {
        monic
            .iter()
            .rev()
            .fold(ComplexF::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    let mut z: Vec<ComplexF> = (0..deg)
        .map(|i| ComplexF::from_polar(radius, 2.0 * PI * i as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..DK_MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(ComplexF::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < DK_STEP_TOL {
            break;
        }
    }
    for root in &z {
        let scale = monic
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() * root.norm().powi(i as i32))
            .sum::<f64>()
            .max(1.0);
        let residual = eval(*root).norm();
        if !residual.is_finite() || residual >= RESIDUAL_TOL * scale {
            return Err(Error::RootFindingDiverged(format!(
                "residual {residual:e} at {root} exceeds tolerance"
            )));
        }
    }
    Ok(z)
}

fn numeric_roots(factor: &Poly) -> Result<Vec<RootKind>> {
    let roots = durand_kerner(&factor.to_f64())?;
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..].iter().any(|b| (a - b).norm() < DEDUP_TOL) {
            return Err(Error::RootFindingDiverged(format!(
                "two roots of a square-free factor coincide near {a}"
            )));
        }
    }
    let tol = |z: &ComplexF| CONJUGATE_TOL * z.norm().max(1.0);
    let mut kinds = Vec::new();
    let mut lower: Vec<ComplexF> = roots.iter().copied().filter(|z| z.im < -tol(z)).collect();
    for z in &roots {
        if z.im.abs() <= tol(z) {
            kinds.push(RootKind::RealIrrational {
                value: z.re,
                source_quadratic: None,
            });
        } else if z.im > 0.0 {
            let partner = lower
                .iter()
                .position(|w| (w.re - z.re).abs() <= tol(z) && (w.im + z.im).abs() <= tol(z))
                .ok_or_else(|| {
                    Error::RootFindingDiverged(format!("no conjugate found for {z}"))
                })?;
            let w = lower.swap_remove(partner);
            let mid = ComplexF::new((z.re + w.re) / 2.0, (z.im - w.im) / 2.0);
            let (r, phi) = to_polar(mid)?;
            kinds.push(RootKind::ComplexPair {
                r,
                phi,
                r_exact: None,
                source_quadratic: None,
            });
        }
    }
    if !lower.is_empty() {
        return Err(Error::RootFindingDiverged("unpaired complex roots".into()));
    }
    Ok(kinds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    None,
    Cos,
    Sin,
}

/// `n^(order) * root^(n - order)`, or its cos/sin part for a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisFunction {
    pub root: usize,
    pub order: usize,
    pub trig: Trig,
}

fn falling_factorial(n: u64, j: usize) -> u64 {
    (0..j as u64).fold(1u64, |acc, i| acc.saturating_mul(n.saturating_sub(i)))
}

fn falling_factorial_exact(n: u64, j: usize) -> BigInt {
    (0..j as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(n.saturating_sub(i)))
}

impl BasisFunction {
    pub fn eval(&self, roots: &[Root], n: u64) -> f64 {
        let j = self.order as u64;
        if n < j {
            return 0.0;
        }
        let ff = falling_factorial(n, self.order) as f64;
        let e = n - j;
        match &roots[self.root].kind {
            RootKind::Rational(v) => ff * powu(to_f64(v), e),
            RootKind::RealIrrational { value, .. } => ff * powu(*value, e),
            RootKind::ComplexPair { r, phi, .. } => {
                let angle = e as f64 * phi;
                let trig = match self.trig {
                    Trig::Sin => angle.sin(),
                    _ => angle.cos(),
                };
                ff * powu(*r, e) * trig
            }
        }
    }

    /// Exact value; `None` unless the root is rational.
    pub fn eval_exact(&self, roots: &[Root], n: u64) -> Option<Rational> {
        let RootKind::Rational(v) = &roots[self.root].kind else {
            return None;
        };
        let j = self.order as u64;
        if n < j {
            return Some(Rational::zero());
        }
        let ff = Rational::from_integer(falling_factorial_exact(n, self.order));
        Some(ff * v.pow(n - j))
    }
}

fn powu(x: f64, e: u64) -> f64 {
    match i32::try_from(e) {
        Ok(e) => x.powi(e),
        Err(_) => x.powf(e as f64),
    }
}

/// Square system `matrix * (c_0, ..., c_(r-1))^T = basis(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationSystem {
    pub matrix: Vec<Vec<f64>>,
    /// The same matrix in exact arithmetic, when every root is rational.
    pub matrix_exact: Option<Mat>,
    pub basis: Vec<BasisFunction>,
}

/// Entry `d^j/dk^j [k^p]` at a real root: `p^(j) lambda^(p-j)`.
fn derivative_row_exact(lambda: &Rational, j: usize, r: usize) -> Vec<Rational> {
    (0..r)
        .map(|p| {
            if p < j {
                Rational::zero()
            } else {
                Rational::from_integer(falling_factorial_exact(p as u64, j))
                    * lambda.pow((p - j) as u64)
            }
        })
        .collect()
}

pub fn build_interpolation_system(roots: &[Root], modulus_degree: usize) -> Result<InterpolationSystem> {
    let total: usize = roots.iter().map(Root::count).sum();
    if total != modulus_degree {
        return Err(Error::InvalidInput(format!(
            "roots account for {total} equations but the modulus has degree {modulus_degree}"
        )));
    }
    let r = modulus_degree;
    let all_rational = roots.iter().all(Root::is_rational);
    let mut matrix = Vec::with_capacity(r);
    let mut exact_rows = Vec::new();
    let mut basis = Vec::with_capacity(r);
    for (idx, root) in roots.iter().enumerate() {
        for j in 0..root.multiplicity {
            let ff = |p: usize| falling_factorial(p as u64, j) as f64;
            match &root.kind {
                RootKind::Rational(v) => {
                    let row = derivative_row_exact(v, j, r);
                    matrix.push(row.iter().map(to_f64).collect());
                    if all_rational {
                        exact_rows.push(row);
                    }
                    basis.push(BasisFunction { root: idx, order: j, trig: Trig::None });
                }
                RootKind::RealIrrational { value, .. } => {
                    matrix.push(
                        (0..r)
                            .map(|p| if p < j { 0.0 } else { ff(p) * powu(*value, (p - j) as u64) })
                            .collect(),
                    );
                    basis.push(BasisFunction { root: idx, order: j, trig: Trig::None });
                }
                RootKind::ComplexPair { r: modulus, phi, .. } => {
                    for trig in [Trig::Cos, Trig::Sin] {
                        matrix.push(
                            (0..r)
                                .map(|p| {
                                    if p < j {
                                        return 0.0;
                                    }
                                    let e = (p - j) as f64;
                                    let t = if trig == Trig::Cos { (e * phi).cos() } else { (e * phi).sin() };
                                    ff(p) * powu(*modulus, (p - j) as u64) * t
                                })
                                .collect(),
                        );
                        basis.push(BasisFunction { root: idx, order: j, trig });
                    }
                }
            }
        }
    }
    let matrix_exact = if all_rational {
        Some(Mat::from_rows(exact_rows)?)
    } else {
        None
    };
    Ok(InterpolationSystem {
        matrix,
        matrix_exact,
        basis,
    })
}

/// Inverse by Gauss-Jordan elimination with full pivoting.
fn invert_full_pivot(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    // col_perm[k] = original column that ended up in position k
    let mut col_perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, 0.0);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.abs() > best {
                    (pr, pc, best) = (i, j, x.abs());
                }
            }
        }
        if best <= f64::EPSILON * scale * n as f64 || best == 0.0 {
            return Err(Error::SingularSystem);
        }
        a.swap(k, pr);
        inv.swap(k, pr);
        for row in &mut a {
            row.swap(k, pc);
        }
        col_perm.swap(k, pc);
        let piv = a[k][k];
        for x in &mut a[k] {
            *x /= piv;
        }
        for x in &mut inv[k] {
            *x /= piv;
        }
        let (pa, pi) = (a[k].clone(), inv[k].clone());
        for i in (0..n).filter(|&i| i != k) {
            let f = a[i][k];
            if f == 0.0 {
                continue;
            }
            for (x, p) in a[i].iter_mut().zip(&pa) {
                *x -= f * p;
            }
            for (x, p) in inv[i].iter_mut().zip(&pi) {
                *x -= f * p;
            }
        }
    }
    // a is now the identity on permuted columns: solution row k belongs to
    // unknown col_perm[k].
    let mut out = vec![Vec::new(); n];
    for (k, row) in inv.into_iter().enumerate() {
        out[col_perm[k]] = row;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulus {
    Minpoly,
    Charpoly,
}

/// One `coeff * n^(order) * root^(n-order) [* cos|sin((n-order) phi)]` summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    /// Exact coefficient, when every root of the modulus is rational.
    pub exact: Option<Rational>,
    pub n_power: usize,
    /// Index into [`ClosedForm::roots`].
    pub root: usize,
    pub trig: Trig,
}

impl Term {
    fn basis(&self) -> BasisFunction {
        BasisFunction {
            root: self.root,
            order: self.n_power,
            trig: self.trig,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub dim: usize,
    pub modulus: Poly,
    pub roots: Vec<Root>,
    pub system: InterpolationSystem,
    /// Inverse of the interpolation matrix: `c_p(n) = sum_b inverse[p][b] * basis_b(n)`.
    pub inverse: Vec<Vec<f64>>,
    pub inverse_exact: Option<Mat>,
    /// `terms[i][j]` are the summands of entry `(i, j)` of `A^n`.
    pub terms: Vec<Vec<Vec<Term>>>,
}

pub fn closed_form(a: &Mat) -> Result<ClosedForm> {
    closed_form_with(a, Modulus::Minpoly)
}

pub fn closed_form_with(a: &Mat, modulus: Modulus) -> Result<ClosedForm> {
    let q = match modulus {
        Modulus::Minpoly => minimal_polynomial(a)?.q,
        Modulus::Charpoly => charpoly(a),
    };
    let r = q.degree().ok_or(Error::InvalidModulus)?;
    let roots = find_roots(&q)?;
    let system = build_interpolation_system(&roots, r)?;
    let inverse_exact = match &system.matrix_exact {
        Some(m) => Some(m.inverse().map_err(|_| Error::SingularSystem)?),
        None => None,
    };
    let inverse = match &inverse_exact {
        Some(m) => m.to_f64(),
        None => invert_full_pivot(&system.matrix)?,
    };

    let m = a.dim();
    let mut powers = vec![Mat::identity(m)];
    for _ in 1..r {
        let next = powers.last().expect("nonempty") * a;
        powers.push(next);
    }
    let mut terms = vec![vec![Vec::new(); m]; m];
    for (i, row) in terms.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for (b, func) in system.basis.iter().enumerate() {
                let (coeff, exact) = match &inverse_exact {
                    Some(inv) => {
                        let c: Rational = (0..r).map(|p| inv.get(p, b) * powers[p].get(i, j)).sum();
                        (to_f64(&c), Some(c))
                    }
                    None => (
                        (0..r).map(|p| inverse[p][b] * to_f64(powers[p].get(i, j))).sum(),
                        None,
                    ),
                };
                entry.push(Term {
                    coeff,
                    exact,
                    n_power: func.order,
                    root: func.root,
                    trig: func.trig,
                });
            }
            let largest = entry.iter().fold(0.0f64, |s, t| s.max(t.coeff.abs()));
            entry.retain(|t| match &t.exact {
                Some(c) => !c.is_zero(),
                None => t.coeff.abs() > 1e-13 * largest,
            });
        }
    }
    Ok(ClosedForm {
        dim: m,
        modulus: q,
        roots,
        system,
        inverse,
        inverse_exact,
        terms,
    })
}

impl ClosedForm {
    pub fn is_exact(&self) -> bool {
        self.inverse_exact.is_some()
    }

    fn basis_values(&self, n: u64) -> Vec<f64> {
        self.system.basis.iter().map(|b| b.eval(&self.roots, n)).collect()
    }

    /// Coefficients `c_0(n), ..., c_(r-1)(n)` of the remainder `v(k)`.
    pub fn remainder_coefficients(&self, n: u64) -> Vec<f64> {
        if let Some(exact) = self.remainder_coefficients_exact(n) {
            return exact.iter().map(to_f64).collect();
        }
        let values = self.basis_values(n);
        self.inverse
            .iter()
            .map(|row| row.iter().zip(&values).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn remainder_coefficients_exact(&self, n: u64) -> Option<Vec<Rational>> {
        let inv = self.inverse_exact.as_ref()?;
        let values: Vec<Rational> = self
            .system
            .basis
            .iter()
            .map(|b| b.eval_exact(&self.roots, n))
            .collect::<Option<_>>()?;
        Some(
            (0..inv.dim())
                .map(|p| values.iter().enumerate().map(|(b, v)| inv.get(p, b) * v).sum())
                .collect(),
        )
    }

    /// Exact `A^n` from the closed form; `None` unless all roots are rational.
    pub fn eval_exact(&self, n: u64) -> Option<Mat> {
        if !self.is_exact() {
            return None;
        }
        let rows = self
            .terms
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| {
                        entry
                            .iter()
                            .map(|t| {
                                let v = t.basis().eval_exact(&self.roots, n)?;
                                Some(t.exact.as_ref()? * v)
                            })
                            .sum::<Option<Rational>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Mat::from_rows(rows).ok()
    }

    pub fn eval(&self, n: u64) -> Vec<Vec<f64>> {
        eval_closed_form(self, n)
    }
}

pub fn eval_closed_form(cf: &ClosedForm, n: u64) -> Vec<Vec<f64>> {
    if let Some(exact) = cf.eval_exact(n) {
        return exact.to_f64();
    }
    cf.terms
        .iter()
        .map(|row| {
            row.iter()
                .map(|entry| {
                    entry
                        .iter()
                        .map(|t| t.coeff * t.basis().eval(&cf.roots, n))
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// `lim A^n` for a row-stochastic `A`, when 1 is a simple root and every
/// other root lies strictly inside the unit circle.
pub fn markov_limit(a: &Mat) -> Result<Vec<Vec<f64>>> {
    let m = a.dim();
    for i in 0..m {
        if let Some(j) = (0..m).find(|&j| a.get(i, j).is_negative()) {
            return Err(Error::NotStochastic(format!("entry ({i}, {j}) is negative")));
        }
        let sum: Rational = (0..m).map(|j| a.get(i, j).clone()).sum();
        if !sum.is_one() {
            return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
        }
    }
    let cf = closed_form(a)?;
    let one = Rational::one();
    let unit = cf
        .roots
        .iter()
        .position(|r| r.kind == RootKind::Rational(one.clone()))
        .ok_or_else(|| Error::Internal("stochastic matrix without eigenvalue 1".into()))?;
    if cf.roots[unit].multiplicity != 1 {
        return Err(Error::NoLimit("eigenvalue 1 is not simple in the minimal polynomial".into()));
    }
    if let Some(bad) = cf
        .roots
        .iter()
        .enumerate()
        .find(|&(i, r)| i != unit && r.modulus() >= 1.0 - UNIT_CIRCLE_MARGIN)
    {
        return Err(Error::NoLimit(format!(
            "root {} has modulus {:.6} on the unit circle",
            bad.1.to_complex(),
            bad.1.modulus()
        )));
    }
    Ok(cf
        .terms
        .iter()
        .map(|row| {
            row.iter()
                .map(|entry| {
                    entry
                        .iter()
                        .filter(|t| t.root == unit)
                        .map(|t| t.exact.as_ref().map_or(t.coeff, to_f64))
                        .sum()
                })
                .collect()
        })
        .collect())
}

fn fmt_base(root: &Root, order: usize) -> String {
    let exponent = match order {
        0 => "n".to_string(),
        j => format!("(n-{j})"),
    };
    let paren = |s: String| {
        if s.starts_with('-') || s.contains('/') {
            format!("({s})")
        } else {
            s
        }
    };
    match &root.kind {
        RootKind::Rational(v) => format!("{}^{exponent}", paren(v.to_string())),
        RootKind::RealIrrational { value, .. } => format!("{}^{exponent}", paren(format!("{value:.6}"))),
        RootKind::ComplexPair { r, r_exact, .. } => {
            let base = r_exact.as_ref().map_or_else(|| format!("{r:.6}"), ToString::to_string);
            format!("{}^{exponent}", paren(base))
        }
    }
}

fn fmt_falling(order: usize) -> Option<String> {
    match order {
        0 => None,
        1 => Some("n".into()),
        j => Some(
            std::iter::once("n".to_string())
                .chain((1..j).map(|i| format!("(n-{i})")))
                .collect::<Vec<_>>()
                .join("*"),
        ),
    }
}

/// One line per entry, e.g. `A^n[0][0] = 1/4 * 3^n + 3/4 * (-5)^n`.
impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.terms.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                write!(f, "A^n[{i}][{j}] = ")?;
                if entry.is_empty() {
                    writeln!(f, "0")?;
                    continue;
                }
                for (idx, t) in entry.iter().enumerate() {
                    let negative = match &t.exact {
                        Some(c) => c.is_negative(),
                        None => t.coeff < 0.0,
                    };
                    let magnitude = match &t.exact {
                        Some(c) => c.abs().to_string(),
                        None => format!("{:.6}", t.coeff.abs()),
                    };
                    match (idx, negative) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    let mut parts = vec![magnitude];
                    parts.extend(fmt_falling(t.n_power));
                    parts.push(fmt_base(&self.roots[t.root], t.n_power));
                    if let RootKind::ComplexPair { phi, .. } = self.roots[t.root].kind {
                        let arg = match t.n_power {
                            0 => "n".to_string(),
                            k => format!("(n-{k})"),
                        };
                        let func = if t.trig == Trig::Sin { "sin" } else { "cos" };
                        parts.push(format!("{func}({arg}*{phi:.6})"));
                    }
                    f.write_str(&parts.join(" * "))?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient_pow::{matrix_power, PowerMethod};
    use crate::scalar::frac;
    use proptest::prelude::*;

    fn rat(v: i64, mult: usize) -> Root {
        Root {
            kind: RootKind::Rational(int(v)),
            multiplicity: mult,
        }
    }

    fn example_two() -> Mat {
        Mat::from_rows(vec![
            vec![int(0), int(1), int(0)],
            vec![int(0), frac(2, 3), frac(1, 3)],
            vec![frac(1, 3), int(0), frac(2, 3)],
        ])
        .unwrap()
    }

    #[test]
    fn roots_of_rational_polynomials() {
        assert_eq!(find_roots(&Poly::from_i64s(&[-15, 2, 1])).unwrap(), vec![rat(-5, 1), rat(3, 1)]);
        assert_eq!(
            find_roots(&Poly::from_i64s(&[45, -21, -1, 1])).unwrap(),
            vec![rat(3, 2), rat(-5, 1)]
        );
        assert_eq!(find_roots(&Poly::from_i64s(&[0, 0, 0, 1])).unwrap(), vec![rat(0, 3)]);
        let halves = find_roots(&Poly::new(vec![frac(-1, 4), int(0), int(1)])).unwrap();
        assert_eq!(halves.len(), 2);
        assert_eq!(halves[0].kind, RootKind::Rational(frac(-1, 2)));
    }

    #[test]
    fn complex_pair_of_stochastic_example() {
        let roots = find_roots(&charpoly(&example_two())).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], rat(1, 1));
        let RootKind::ComplexPair { r, phi, r_exact, .. } = &roots[1].kind else {
            panic!("expected a pair, got {:?}", roots[1]);
        };
        assert!((r - 1.0 / 3.0).abs() < 1e-15);
        assert!((phi - PI / 3.0).abs() < 1e-15);
        assert_eq!(r_exact, &Some(frac(1, 3)));
    }

    #[test]
    fn irrational_quadratic_and_numeric_cubic() {
        // k^2 - 2
        let roots = find_roots(&Poly::from_i64s(&[-2, 0, 1])).unwrap();
        let values: Vec<f64> = roots.iter().map(|r| r.to_complex().re).collect();
        assert!((values[0] + 2f64.sqrt()).abs() < 1e-15);
        assert!((values[1] - 2f64.sqrt()).abs() < 1e-15);

        // k^3 - 2: one real root, one complex pair
        let roots = find_roots(&Poly::from_i64s(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        let cbrt = 2f64.cbrt();
        assert!(matches!(roots[0].kind, RootKind::RealIrrational { value, .. } if (value - cbrt).abs() < 1e-12));
        assert!(matches!(roots[1].kind,
            RootKind::ComplexPair { r, phi, .. } if (r - cbrt).abs() < 1e-12 && (phi - 2.0 * PI / 3.0).abs() < 1e-12));
    }

    #[test]
    fn root_count_matches_degree() {
        // (k^2 + 1)^2 (k - 1/2) (k^3 - 3k + 1)
        let q = &(&(&Poly::from_i64s(&[1, 0, 1]) * &Poly::from_i64s(&[1, 0, 1]))
            * &Poly::new(vec![frac(-1, 2), int(1)]))
            * &Poly::from_i64s(&[1, -3, 0, 1]);
        let roots = find_roots(&q).unwrap();
        assert_eq!(roots.iter().map(Root::count).sum::<usize>(), 8);
        assert_eq!(roots[0].multiplicity, 2);
        for root in &roots {
            if let RootKind::Rational(v) = &root.kind {
                assert!(q.eval(v).is_zero());
            } else {
                assert!(q.eval_complex(root.to_complex()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn large_coefficients_fall_back_to_numeric_candidates() {
        let big = 10_000_019i64; // prime, square exceeds the trial-division cap
        let q = &Poly::from_i64s(&[-big, 1]) * &Poly::from_i64s(&[-big - 2, 1]);
        let q = &q * &Poly::from_i64s(&[1, 1, 1]);
        let roots = find_roots(&q).unwrap();
        assert!(roots.contains(&rat(big, 1)));
        assert!(roots.contains(&rat(big + 2, 1)));
    }

    #[test]
    fn system_of_repeated_root_example() {
        let sys = build_interpolation_system(&[rat(3, 2), rat(-5, 1)], 3).unwrap();
        let exact = sys.matrix_exact.unwrap();
        assert_eq!(exact.rows(), Mat::from_i64_rows(&[[1, 3, 9], [0, 1, 6], [1, -5, 25]]).unwrap().rows());
        assert_eq!(
            sys.basis,
            vec![
                BasisFunction { root: 0, order: 0, trig: Trig::None },
                BasisFunction { root: 0, order: 1, trig: Trig::None },
                BasisFunction { root: 1, order: 0, trig: Trig::None },
            ]
        );
        let roots = [rat(3, 2), rat(-5, 1)];
        assert_eq!(sys.basis[1].eval(&roots, 4), 4.0 * 27.0);
        assert_eq!(sys.basis[1].eval(&roots, 0), 0.0);
        assert_eq!(sys.basis[2].eval_exact(&roots, 3), Some(int(-125)));
    }

    #[test]
    fn single_root_system() {
        let sys = build_interpolation_system(&[rat(7, 1)], 1).unwrap();
        assert_eq!(sys.matrix, vec![vec![1.0]]);
        assert!(build_interpolation_system(&[rat(7, 1)], 2).is_err());
    }

    #[test]
    fn full_pivot_inverse() {
        let m = vec![vec![0.0, 2.0, 1.0], vec![1.0, 0.0, 0.0], vec![3.0, 1.0, 5.0]];
        let inv = invert_full_pivot(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert_eq!(invert_full_pivot(&[vec![1.0, 2.0], vec![2.0, 4.0]]), Err(Error::SingularSystem));
    }

    #[test]
    fn closed_form_entry_of_example_matrix() {
        let p = Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).unwrap();
        let cf = closed_form(&p).unwrap();
        assert!(cf.is_exact());
        let entry = &cf.terms[0][0];
        let coeff_of = |v: i64| {
            entry
                .iter()
                .find(|t| cf.roots[t.root].kind == RootKind::Rational(int(v)))
                .and_then(|t| t.exact.clone())
        };
        assert_eq!(coeff_of(3), Some(frac(1, 4)));
        assert_eq!(coeff_of(-5), Some(frac(3, 4)));
        assert_eq!(cf.eval_exact(0).unwrap(), Mat::identity(3));
        assert_eq!(cf.eval_exact(1).unwrap(), p);
        assert_eq!(
            cf.to_string().lines().next().unwrap(),
            "A^n[0][0] = 3/4 * (-5)^n + 1/4 * 3^n"
        );
    }

    #[test]
    fn diagonal_closed_form() {
        let d = Mat::from_i64_rows(&[[2, 0], [0, 3]]).unwrap();
        let cf = closed_form(&d).unwrap();
        assert_eq!(eval_closed_form(&cf, 4), vec![vec![16.0, 0.0], vec![0.0, 81.0]]);
        assert!(cf.terms[0][1].is_empty());
        assert_eq!(cf.to_string(), "A^n[0][0] = 1 * 2^n\nA^n[0][1] = 0\nA^n[1][0] = 0\nA^n[1][1] = 1 * 3^n\n");
    }

    #[test]
    fn repeated_root_closed_form_is_exact() {
        let p = Mat::from_i64_rows(&[[-3, 6, 0], [2, 1, 0], [0, 0, 3]]).unwrap();
        let cf = closed_form_with(&p, Modulus::Charpoly).unwrap();
        for n in 0..=12 {
            assert_eq!(cf.eval_exact(n).unwrap(), matrix_power(&p, n, PowerMethod::Naive).unwrap());
        }
        // Jordan block: n * 2^(n-1) appears off the diagonal
        let j = Mat::from_i64_rows(&[[2, 1], [0, 2]]).unwrap();
        let cf = closed_form(&j).unwrap();
        assert_eq!(cf.eval_exact(5).unwrap(), Mat::from_i64_rows(&[[32, 80], [0, 32]]).unwrap());
        assert!(cf.to_string().contains("A^n[0][1] = 1 * n * 2^(n-1)"));
    }

    #[test]
    fn nilpotent_closed_form() {
        let j = Mat::from_i64_rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]).unwrap();
        let cf = closed_form(&j).unwrap();
        for n in 0..6 {
            assert_eq!(cf.eval_exact(n).unwrap(), matrix_power(&j, n, PowerMethod::Naive).unwrap());
        }
    }

    #[test]
    fn complex_closed_form_matches_exact_powers() {
        let p = example_two();
        let cf = closed_form(&p).unwrap();
        assert!(!cf.is_exact());
        for n in 0..=20 {
            let exact = matrix_power(&p, n, PowerMethod::ViaMinpoly).unwrap().to_f64();
            let approx = eval_closed_form(&cf, n);
            for (x, y) in exact.iter().flatten().zip(approx.iter().flatten()) {
                assert!((x - y).abs() < 1e-12, "n = {n}: {x} vs {y}");
            }
        }
        let text = cf.to_string();
        assert!(text.contains("(1/3)^n * sin(n*1.047198)"), "{text}");
    }

    #[test]
    fn markov_examples() {
        let limit = markov_limit(&example_two()).unwrap();
        for row in &limit {
            for (x, y) in row.iter().zip([1.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0]) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        let half = Mat::from_rows(vec![vec![frac(1, 2); 2]; 2]).unwrap();
        assert_eq!(markov_limit(&half).unwrap(), vec![vec![0.5; 2]; 2]);
        let flip = Mat::from_i64_rows(&[[0, 1], [1, 0]]).unwrap();
        assert!(matches!(markov_limit(&flip), Err(Error::NoLimit(_))));
        let bad = Mat::from_i64_rows(&[[2, -1], [0, 1]]).unwrap();
        assert!(matches!(markov_limit(&bad), Err(Error::NotStochastic(_))));
        let short = Mat::from_rows(vec![vec![frac(1, 2), frac(1, 3)], vec![int(0), int(1)]]).unwrap();
        assert!(matches!(markov_limit(&short), Err(Error::NotStochastic(_))));
    }

    fn small_matrix() -> impl Strategy<Value = Mat> {
        (1usize..5).prop_flat_map(|m| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, m), m)
                .prop_map(|rows| Mat::from_i64_rows(&rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn roots_account_for_every_degree(a in small_matrix()) {
            let q = charpoly(&a);
            let roots = find_roots(&q).unwrap();
            let total: usize = roots.iter().map(Root::count).sum();
            prop_assert_eq!(total, q.degree().unwrap());
        }

        /// Solved coefficients satisfy the interpolation system, and agree
        /// with the exact remainder `k^n mod q` when all roots are rational.
        #[test]
        fn interpolation_residual(a in small_matrix(), n in 0u64..30) {
            let cf = closed_form(&a).unwrap();
            let c = cf.remainder_coefficients(n);
            let rhs: Vec<f64> = cf.system.basis.iter().map(|b| b.eval(&cf.roots, n)).collect();
            let scale = rhs.iter().fold(1.0f64, |s, x| s.max(x.abs()));
            for (row, want) in cf.system.matrix.iter().zip(&rhs) {
                let got: f64 = row.iter().zip(&c).map(|(x, y)| x * y).sum();
                prop_assert!((got - want).abs() <= 1e-12 * scale, "{} vs {}", got, want);
            }
            if let Some(exact) = cf.remainder_coefficients_exact(n) {
                let v = Poly::modpow(n, &cf.modulus).unwrap();
                let padded: Vec<Rational> = (0..exact.len()).map(|p| v.coeff(p)).collect();
                prop_assert_eq!(exact, padded);
            }
        }

        #[test]
        fn closed_form_tracks_exact_powers(a in small_matrix()) {
            let cf = closed_form(&a).unwrap();
            prop_assume!(cf.roots.iter().all(|r| r.modulus() <= 5.0));
            let mut power = Mat::identity(a.dim());
            for n in 0..=25u64 {
                if let Some(exact) = cf.eval_exact(n) {
                    prop_assert_eq!(&exact, &power);
                }
                let want = power.to_f64();
                let scale = want.iter().flatten().fold(1.0f64, |s, x| s.max(x.abs()));
                for (x, y) in want.iter().flatten().zip(cf.eval(n).iter().flatten()) {
                    prop_assert!((x - y).abs() <= 1e-9 * scale, "n = {}: {} vs {}", n, y, x);
                }
                power = &power * &a;
            }
        }
    }
}
