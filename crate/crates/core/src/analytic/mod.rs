//! The Hardy-space side: `F_lambda`, `G_l`, `E`, the Moebius partial sums
//! `H_{L,eps}` and their limit `H_eps`, the inner functions `Theta_mu`, and
//! numerical checks of the identities relating them.

pub mod grids;
mod mellin;

use num_complex::Complex64;
use serde::Serialize;

pub use grids::Grid;
pub use mellin::{mellin_exact, KernelKind, MellinKernel, MellinValue};

use crate::arith::MoebiusTable;
use crate::error::{Error, Result};
use crate::specfun::{ensure_finite, expm1_over, zeta, zeta_deflated};
use crate::sum::ComplexSum;

/// Inside this distance from `s = 1` the pole of `zeta` is divided out
/// before multiplying by the vanishing factor.
pub const DEFLATION_RADIUS: f64 = 1e-3;

/// `|zeta(s + eps)|` at or below this makes `H_eps` an unstable evaluation.
pub const ZETA_FLOOR: f64 = 1e-8;

/// Pieces used by [`verify_claim`]; the Euler-Maclaurin tail makes more
/// unnecessary.
pub const CLAIM_PIECES: u64 = 1000;

/// A sample point with the function values computed at it.
#[derive(Debug, Clone, Serialize)]
pub struct GridSample {
    pub s: (f64, f64),
    pub values: Vec<(String, (f64, f64))>,
}

impl GridSample {
    pub fn new(s: Complex64) -> Self {
        GridSample {
            s: (s.re, s.im),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, v: Complex64) {
        self.values.push((name.into(), (v.re, v.im)));
    }
}

fn near_one(s: Complex64) -> bool {
    (s - 1.0).norm() < DEFLATION_RADIUS
}

/// `(a^s - a) / (s - 1)` for `a > 0`, regular at `s = 1` (value `a ln a`).
fn power_difference_quotient(a: f64, s: Complex64) -> Complex64 {
    let ln_a = a.ln();
    a * ln_a * expm1_over((s - 1.0) * ln_a)
}

/// `F_lambda(s) = (lambda^s - lambda) zeta(s) / s`.
///
/// Near `s = 1` evaluated as `[(lambda^s - lambda)/(s-1)] [(s-1) zeta(s)] / s`;
/// the value at `s = 1` is `lambda ln lambda`.
pub fn f_lambda(lambda: f64, s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    if lambda == 0.0 || lambda == 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if near_one(s) {
        return Ok(power_difference_quotient(lambda, s) * zeta_deflated(s)? / s);
    }
    let lambda_s = (s * lambda.ln()).exp();
    Ok((lambda_s - lambda) * zeta(s)? / s)
}

/// `G_l = F_{1/l}`, i.e. `(l^(-s) - 1/l) zeta(s) / s`.
pub fn g_l(l: u64, s: Complex64) -> Result<Complex64> {
    if l == 0 {
        return Err(Error::domain("G_l needs l >= 1"));
    }
    f_lambda(1.0 / l as f64, s)
}

/// `E(s) = 1/s`, the transform of the constant function 1.
pub fn e_fn(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole("E at s = 0".into()));
    }
    Ok(s.inv())
}

/// `Theta_mu(s) = mu^(s - 1/2)`.
pub fn theta(mu: f64, s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    Ok(((s - 0.5) * mu.ln()).exp())
}

fn check_partial_args(l_max: u64, eps: f64, table: &MoebiusTable) -> Result<()> {
    if l_max == 0 || l_max as usize > table.limit() {
        return Err(Error::domain(format!(
            "L = {l_max} outside the Moebius table range 1..={}",
            table.limit()
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// `H_{L,eps}(s) = (zeta(s)/s) (sum_{l<=L} mu(l) l^(-s-eps) - sum_{l<=L}
/// mu(l) l^(-1-eps))`, assembled from the two Dirichlet polynomials.
pub fn h_partial(l_max: u64, eps: f64, s: Complex64, table: &MoebiusTable) -> Result<Complex64> {
    ensure_finite(s)?;
    check_partial_args(l_max, eps, table)?;
    let terms = (1..=l_max).filter_map(|l| {
        let mu = table.mu(l as usize);
        (mu != 0).then_some((l as f64, f64::from(mu)))
    });
    if near_one(s) {
        // bracket / (s - 1) = sum mu(l) l^(-eps) (l^(-s) - l^(-1)) / (s - 1)
        let mut bracket = ComplexSum::new();
        for (l, mu) in terms {
            let inv = 1.0 / l;
            bracket.add(mu * l.powf(-eps) * power_difference_quotient(inv, s));
        }
        return Ok(zeta_deflated(s)? / s * bracket.value());
    }
    let mut shifted = ComplexSum::new();
    let mut at_one = ComplexSum::new();
    for (l, mu) in terms {
        let ln_l = l.ln();
        shifted.add(mu * (-(s + eps) * ln_l).exp());
        at_one.add(Complex64::new(mu * (-(1.0 + eps) * ln_l).exp(), 0.0));
    }
    Ok(zeta(s)? / s * (shifted.value() - at_one.value()))
}

/// `sum_{l<=L} mu(l) l^(-eps) G_l(s)`, the same function assembled term by
/// term.
pub fn h_partial_termwise(
    l_max: u64,
    eps: f64,
    s: Complex64,
    table: &MoebiusTable,
) -> Result<Complex64> {
    ensure_finite(s)?;
    check_partial_args(l_max, eps, table)?;
    let mut acc = ComplexSum::new();
    for l in 1..=l_max {
        let mu = table.mu(l as usize);
        if mu != 0 {
            acc.add(f64::from(mu) * (l as f64).powf(-eps) * g_l(l, s)?);
        }
    }
    Ok(acc.value())
}

/// `H_eps(s) = (zeta(s)/s) (1/zeta(s+eps) - 1/zeta(1+eps))` on
/// `sigma >= 1/2`, `s != 1`.
pub fn h_limit(eps: f64, s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if s.re < 0.5 {
        return Err(Error::domain(format!("H_eps is evaluated on sigma >= 1/2, got {s}")));
    }
    let shifted = zeta(s + eps)?;
    if shifted.norm() <= ZETA_FLOOR {
        return Err(Error::Unstable(format!(
            "|zeta({})| = {:e} is too close to zero",
            s + eps,
            shifted.norm()
        )));
    }
    let at_one = zeta(Complex64::new(1.0 + eps, 0.0))?;
    Ok(zeta(s)? / s * (shifted.inv() - at_one.inv()))
}

/// `max |F(f_lambda)(s) + F_lambda(s)|` over the grid, where `F(f_lambda)` is
/// the piecewise-exact Mellin transform. Also returns the largest tail bound.
pub fn verify_claim(lambda: f64, grid: &[Complex64]) -> Result<(f64, f64)> {
    let kernel = MellinKernel::new(lambda, KernelKind::FLambda)?;
    let mut max_residual: f64 = 0.0;
    let mut max_tail: f64 = 0.0;
    for &s in grid {
        if s.re <= 0.5 || s == Complex64::new(1.0, 0.0) {
            return Err(Error::domain(format!("claim grid point {s} outside sigma > 1/2, s != 1")));
        }
        let m = mellin_exact(kernel, s, CLAIM_PIECES)?;
        let residual = (m.value + f_lambda(lambda, s)?).norm();
        max_residual = max_residual.max(residual);
        max_tail = max_tail.max(m.tail_bound);
    }
    Ok((max_residual, max_tail))
}

/// `max |Theta_mu F_lambda - mu^(-1/2) (F_{lambda mu} - lambda F_mu)|`.
pub fn semigroup_identity_check(lambda: f64, mu: f64, grid: &[Complex64]) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    let mut worst: f64 = 0.0;
    for &s in grid {
        let lhs = theta(mu, s)? * f_lambda(lambda, s)?;
        let rhs = (f_lambda(lambda * mu, s)? - lambda * f_lambda(mu, s)?) / mu.sqrt();
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `max | |Theta_mu(1/2 + it)| - 1 |` over `t_grid`.
pub fn inner_function_check(mu: f64, t_grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let v = theta(mu, Complex64::new(0.5, t))?;
        worst = worst.max((v.norm() - 1.0).abs());
    }
    Ok(worst)
}

/// `max |Theta_lambda Theta_mu - Theta_{lambda mu}|` over the grid.
pub fn theta_product_check(lambda: f64, mu: f64, grid: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in grid {
        let d = theta(lambda, s)? * theta(mu, s)? - theta(lambda * mu, s)?;
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

/// `sup_s |H_{L,eps}(s) - H_eps(s)|` over the grid.
pub fn h_sup_distance(l_max: u64, eps: f64, grid: &[Complex64], table: &MoebiusTable) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in grid {
        let d = h_partial(l_max, eps, s, table)? - h_limit(eps, s)?;
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

/// Values of the named functions at `s`.
pub fn sample(
    s: Complex64,
    lambda: f64,
    l: u64,
    (l_max, eps): (u64, f64),
    mu: f64,
    table: &MoebiusTable,
) -> Result<GridSample> {
    let mut out = GridSample::new(s);
    out.push("zeta", zeta(s)?);
    out.push("E", e_fn(s)?);
    out.push(format!("F_lambda({lambda})"), f_lambda(lambda, s)?);
    out.push(format!("G_l({l})"), g_l(l, s)?);
    out.push(format!("H_L_eps({l_max},{eps})"), h_partial(l_max, eps, s, table)?);
    out.push(format!("H_eps({eps})"), h_limit(eps, s)?);
    out.push(format!("Theta_mu({mu})"), theta(mu, s)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_moebius;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn f_lambda_trivial_cases() {
        assert_eq!(f_lambda(1.0, c(0.7, 3.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(f_lambda(0.0, c(0.7, 3.0)).unwrap(), c(0.0, 0.0));
        let s = c(2.0, 0.0);
        let expected = (0.25 - 0.5) * PI * PI / 6.0 / 2.0;
        assert!((f_lambda(0.5, s).unwrap().re - expected).abs() < 1e-13);
        assert!((g_l(2, s).unwrap() - f_lambda(0.5, s).unwrap()).norm() == 0.0);
    }

    #[test]
    fn f_lambda_regular_at_one() {
        for lambda in [0.5, 0.2, 0.9] {
            let limit = lambda * f64::ln(lambda);
            let at = f_lambda(lambda, c(1.0, 0.0)).unwrap();
            assert!((at - c(limit, 0.0)).norm() < 1e-14);
            for d in [1e-6, -1e-6, 2e-3, -2e-3] {
                let v = f_lambda(lambda, c(1.0 + d, 0.0)).unwrap();
                assert!(v.re.is_finite());
                assert!((v.re - limit).abs() < 5.0 * d.abs(), "lambda {lambda}, d {d}");
            }
            // both sides of the switch radius agree
            let inside = f_lambda(lambda, c(1.0 + 0.999e-3, 0.0)).unwrap();
            let outside = f_lambda(lambda, c(1.0 + 1.001e-3, 0.0)).unwrap();
            assert!((inside - outside).norm() < 1e-5);
        }
    }

    #[test]
    fn h_partial_small_cases() {
        let table = sieve_moebius(200).unwrap();
        let s = c(0.5, 10.0);
        assert!(h_partial(1, 0.1, s, &table).unwrap().norm() < 1e-15);
        let eps = 0.3;
        let two = h_partial(2, eps, s, &table).unwrap();
        let expected = -(2f64.powf(-eps)) * g_l(2, s).unwrap();
        assert!((two - expected).norm() < 1e-14);
    }

    #[test]
    fn h_two_orders_agree() {
        let table = sieve_moebius(100).unwrap();
        for (l, eps, s) in [
            (100, 0.1, c(0.5, 10.0)),
            (60, 0.5, c(0.8, -3.0)),
            (100, 0.1, c(1.0 + 1e-4, 1e-4)),
            (30, 0.25, c(2.0, 7.0)),
        ] {
            let a = h_partial(l, eps, s, &table).unwrap();
            let b = h_partial_termwise(l, eps, s, &table).unwrap();
            assert!((a - b).norm() <= 1e-12, "L {l}, eps {eps}, s {s}: {}", (a - b).norm());
        }
    }

    #[test]
    fn h_limit_values() {
        let pi2 = PI * PI;
        let zeta10 = pi2.powi(5) / 93_555.0;
        let zeta2 = pi2 / 6.0;
        let zeta11 = 1.000_494_188_604_119_5;
        let expected = zeta10 / 10.0 * (1.0 / zeta11 - 1.0 / zeta2);
        let got = h_limit(1.0, c(10.0, 0.0)).unwrap();
        assert!((got.re - expected).abs() < 1e-12);
        assert!(h_limit(0.5, c(0.5, 14.0)).unwrap().norm().is_finite());
        assert!(h_limit(0.1, c(0.4, 1.0)).is_err());
        assert!(h_limit(0.1, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn sample_records_every_function() {
        let table = sieve_moebius(20).unwrap();
        let v = sample(c(0.5, 3.0), 0.5, 3, (20, 0.1), 0.4, &table).unwrap();
        assert_eq!(v.values.len(), 7);
        assert_eq!(v.values[1].1, (0.5 / 9.25, -3.0 / 9.25));
    }

    #[test]
    fn theta_identities() {
        assert_eq!(inner_function_check(1.0, &grids::inner_t_grid()).unwrap(), 0.0);
        assert!(inner_function_check(0.5, &grids::inner_t_grid()).unwrap() <= 1e-14);
        let g = grids::semigroup_grid();
        assert!(theta_product_check(0.5, 0.4, &g.points).unwrap() <= 1e-14);
        assert!(theta(0.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn semigroup_examples() {
        let g = grids::semigroup_grid();
        assert_eq!(semigroup_identity_check(1.0, 0.3, &g.points).unwrap(), 0.0);
        assert!(semigroup_identity_check(0.5, 1.0, &g.points).unwrap() <= 1e-14);
        assert!(semigroup_identity_check(0.5, 1.0 / 3.0, &g.points).unwrap() <= 1e-10);
    }

    #[test]
    fn claim_examples() {
        let (r, _) = verify_claim(1.0, &grids::claim_grid().points).unwrap();
        assert_eq!(r, 0.0);
        let grid: Vec<_> = [0.75, 2.0]
            .iter()
            .flat_map(|&sigma| [0.0, 5.0].map(|t| c(sigma, t)))
            .collect();
        let (r, tail) = verify_claim(0.5, &grid).unwrap();
        assert!(r <= 1e-8 && tail < 1e-12, "{r}");
        let (r, _) = verify_claim(1.0 / 3.0, &[c(2.0, 0.0)]).unwrap();
        assert!(r <= 1e-8);
        assert!(verify_claim(0.5, &[c(0.5, 1.0)]).is_err());
    }
}
