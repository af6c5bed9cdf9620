use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{expm1_over, ensure_finite};
use crate::sum::ComplexSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// `{lambda / x}`
    FracLambda,
    /// `f_lambda(x) = {lambda / x} - lambda {1 / x}`
    FLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinKernel {
    lambda: f64,
    kind: KernelKind,
}

impl MellinKernel {
    pub fn new(lambda: f64, kind: KernelKind) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        Ok(MellinKernel { lambda, kind })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    /// Certified bound on the error of the omitted `(0, lambda/(K+1)]` part.
    pub tail_bound: f64,
}

/// `B_{2i+2} / (2i+2)!` for `i = 0..6`.
const EM_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];
/// `|B_14| / 14!`
const EM_REMAINDER: f64 = 7.0 / 6.0 / 87_178_291_200.0;

/// `int_0^1 x^(s-1) k(x) dx` for the kernel, integrated exactly over the
/// head `(lambda, 1]` and the pieces `(lambda/(k+1), lambda/k]`,
/// `k = 1..=pieces`.
///
/// With `u = lambda / x` the integral is `lambda^s int_lambda^inf {u}
/// u^(-s-1) du`; the part beyond `N = pieces + 1` is summed by
/// Euler-Maclaurin through the `B_12` term, and `tail_bound` is the
/// remainder estimate with `B_14`.
pub fn mellin_exact(kernel: MellinKernel, s: Complex64, pieces: u64) -> Result<MellinValue> {
    ensure_finite(s)?;
    if s.re <= 0.0 {
        return Err(Error::domain(format!("Mellin integral diverges for sigma <= 0, got {s}")));
    }
    if pieces == 0 {
        return Err(Error::domain("piece count must be at least 1"));
    }
    match kernel.kind {
        KernelKind::FracLambda => frac_lambda(kernel.lambda, s, pieces),
        KernelKind::FLambda => {
            let a = frac_lambda(kernel.lambda, s, pieces)?;
            let b = frac_lambda(1.0, s, pieces)?;
            Ok(MellinValue {
                value: a.value - kernel.lambda * b.value,
                tail_bound: a.tail_bound + kernel.lambda * b.tail_bound,
            })
        }
    }
}

fn frac_lambda(lambda: f64, s: Complex64, pieces: u64) -> Result<MellinValue> {
    if lambda == 0.0 {
        return Ok(MellinValue {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let ln_lambda = lambda.ln();

    let mut acc = ComplexSum::new();
    // int_lambda^1 u^(-s) du
    acc.add(-ln_lambda * expm1_over((one - s) * ln_lambda));
    for k in 1..=pieces {
        acc.add(unit_piece(k, s));
    }
    let n = (pieces + 1) as f64;
    let (tail, bound) = em_tail(n, s);
    acc.add(tail);

    let lambda_s = (s * ln_lambda).exp();
    Ok(MellinValue {
        value: lambda_s * acc.value(),
        tail_bound: lambda_s.norm() * bound,
    })
}

/// `int_k^{k+1} (u - k) u^(-s-1) du = k^(1-s) h [E((1-s)h) - E(-sh)]`
/// with `h = ln(1 + 1/k)` and `E(z) = (e^z - 1)/z`.
fn unit_piece(k: u64, s: Complex64) -> Complex64 {
    let kf = k as f64;
    let h = (1.0 / kf).ln_1p();
    let a = (1.0 - s) * h;
    let b = -s * h;
    let k_pow = ((1.0 - s) * kf.ln()).exp();
    k_pow * h * expm1_over_difference(a, b, h)
}

/// `E(a) - E(b)` for `a - b = h`, by the divided-difference series when
/// both arguments are small so the leading terms do not cancel.
fn expm1_over_difference(a: Complex64, b: Complex64, h: f64) -> Complex64 {
    if a.norm() > 0.5 || b.norm() > 0.5 {
        return expm1_over(a) - expm1_over(b);
    }
    // E(a) - E(b) = h sum_{j>=1} q_j / (j+1)!,  q_j = (a^j - b^j)/(a - b)
    let mut q = Complex64::new(1.0, 0.0);
    let mut b_pow = b;
    let mut fact = 2.0;
    let mut sum = q / fact;
    for j in 2..=24 {
        q = a * q + b_pow;
        b_pow *= b;
        fact *= (j + 1) as f64;
        sum += q / fact;
    }
    h * sum
}

/// `int_N^inf {u} u^(-s-1) du` and its remainder bound.
fn em_tail(n: f64, s: Complex64) -> (Complex64, f64) {
    let ln_n = n.ln();
    let n_pow = (-s * ln_n).exp();
    let mut value = n_pow / (2.0 * s);
    // (s+1)_{2i} N^(-s-1-2i), advanced two factors at a time
    let mut rising = Complex64::new(1.0, 0.0);
    let mut power = n_pow / n;
    for (i, c) in EM_COEFFS.iter().enumerate() {
        if i > 0 {
            let j = (2 * i) as f64;
            rising *= (s + (j - 1.0)) * (s + j);
            power /= n * n;
        }
        value -= *c * rising * power;
    }
    let order = 2 * EM_COEFFS.len() + 1;
    let mut rising_norm = 1.0;
    for j in 1..=order {
        rising_norm *= (s + j as f64).norm();
    }
    let exponent = s.re + order as f64;
    let bound = EM_REMAINDER * rising_norm * (-exponent * ln_n).exp() / exponent;
    (value, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Midpoint-rule oracle in `u`, refined per unit interval.
    fn quadrature(lambda: f64, s: Complex64, upto: u64) -> Complex64 {
        let mut acc = ComplexSum::new();
        let steps = 2000;
        let f = |u: f64| (u - u.floor()) * (-(s + 1.0) * u.ln()).exp();
        let mut lo = lambda;
        let mut hi = 1.0;
        for _ in 0..=upto {
            let w = (hi - lo) / steps as f64;
            for i in 0..steps {
                acc.add(f(lo + (i as f64 + 0.5) * w) * w);
            }
            lo = hi;
            hi += 1.0;
        }
        (s * lambda.ln()).exp() * acc.value()
    }

    #[test]
    fn closed_form_examples() {
        let zeta2 = PI * PI / 6.0;
        let one = MellinKernel::new(1.0, KernelKind::FracLambda).unwrap();
        let v = mellin_exact(one, c(2.0, 0.0), 10_000).unwrap();
        assert!((v.value - c(1.0 - zeta2 / 2.0, 0.0)).norm() < 1e-13);
        let half = MellinKernel::new(0.5, KernelKind::FracLambda).unwrap();
        let v = mellin_exact(half, c(2.0, 0.0), 10).unwrap();
        assert!((v.value - c(0.5 - zeta2 / 8.0, 0.0)).norm() < 1e-13);
        assert!(v.tail_bound < 1e-15);
        let zero = MellinKernel::new(0.0, KernelKind::FracLambda).unwrap();
        assert_eq!(mellin_exact(zero, c(0.7, 3.0), 5).unwrap().value, c(0.0, 0.0));
    }

    #[test]
    fn pieces_match_quadrature_before_the_tail() {
        // With the EM tail switched off by comparing partial sums only.
        let s = c(0.8, 2.0);
        for k in [1u64, 2, 7] {
            let mut acc = ComplexSum::new();
            for j in 1..=k {
                acc.add(unit_piece(j, s));
            }
            let head = -(0.25f64).ln() * expm1_over((1.0 - s) * 0.25f64.ln());
            let ours = (s * 0.25f64.ln()).exp() * (head + acc.value());
            let quad = quadrature(0.25, s, k);
            assert!((ours - quad).norm() < 1e-7, "k = {k}");
        }
    }

    #[test]
    fn independent_of_piece_count() {
        let k = MellinKernel::new(0.3, KernelKind::FracLambda).unwrap();
        let s = c(0.6, -7.0);
        let a = mellin_exact(k, s, 40).unwrap();
        let b = mellin_exact(k, s, 4000).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
        assert!(b.tail_bound < a.tail_bound);
    }

    #[test]
    fn small_argument_difference_series() {
        let s = c(0.75, 3.0);
        for k in [3u64, 50, 10_000] {
            let h = (1.0 / k as f64).ln_1p();
            let (a, b) = ((1.0 - s) * h, -s * h);
            // the direct difference carries an absolute error of a few ulp of 1
            let direct = expm1_over(a) - expm1_over(b);
            let series = expm1_over_difference(a, b, h);
            assert!((direct - series).norm() <= 1e-15, "k = {k}: {direct} vs {series}");
        }
    }

    #[test]
    fn bad_input() {
        assert!(MellinKernel::new(1.5, KernelKind::FLambda).is_err());
        let k = MellinKernel::new(0.5, KernelKind::FLambda).unwrap();
        assert!(mellin_exact(k, c(0.0, 1.0), 10).is_err());
        assert!(mellin_exact(k, c(1.0, 1.0), 0).is_err());
    }
}
