use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::{ensure_finite, expm1, expm1_over, log_gamma};
use crate::error::{Error, Result};
use crate::sum::ComplexSum;

/// Target absolute error of the accelerated eta sum: 1e-10 contract plus
/// four digits.
const ETA_TOLERANCE: f64 = 1e-14;

/// `d_n` overflows f64 past this many terms.
const MAX_TERMS: usize = 400;
const MIN_TERMS: usize = 16;

/// Radius around `1 + 2 pi i k / ln 2` (k != 0) that is refused.
const UNSTABLE_RADIUS: f64 = 1e-8;

/// Dirichlet eta `sum (-1)^(n-1) n^-s` for `sigma >= 0`.
///
/// Uses the Chebyshev-weighted alternating sum
/// `eta(s) = sum_{k<n} (-1)^k (1 - d_k/d_n) (k+1)^-s` with
/// `d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)`. The error is at most
/// `Gamma(sigma) / (|Gamma(s)| d_n)`; `n` is the smallest count pushing that
/// below `ETA_TOLERANCE`.
pub fn eta(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if s.re < 0.0 {
        return Err(Error::domain(format!("eta evaluated on sigma >= 0 only, got {s}")));
    }
    let n = term_count(s)?;
    let weights = chebyshev_weights(n);

    let mut acc = ComplexSum::new();
    for (k, w) in weights.iter().enumerate() {
        let term = (-s * ((k + 1) as f64).ln()).exp() * *w;
        if k % 2 == 0 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
    }
    Ok(acc.value())
}

/// Riemann zeta on `sigma >= 0`, `s != 1`, as `eta(s) / (1 - 2^(1-s))`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    check_denominator(s)?;
    let eta = eta(s)?;
    // 1 - 2^(1-s) = -expm1((1-s) ln 2)
    let denom = -expm1((1.0 - s) * LN_2);
    Ok(eta / denom)
}

/// `(s - 1) zeta(s)`, analytic at `s = 1` where it equals 1.
pub fn zeta_deflated(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    check_denominator(s)?;
    let eta = eta(s)?;
    // (s-1) / (1 - 2^(1-s)) = 1 / (ln 2 * expm1(w)/w),  w = (1-s) ln 2
    let w = (1.0 - s) * LN_2;
    Ok(eta / (expm1_over(w) * LN_2))
}

fn check_denominator(s: Complex64) -> Result<()> {
    let period = 2.0 * PI / LN_2;
    let k = (s.im / period).round();
    if k != 0.0 {
        let zero = Complex64::new(1.0, k * period);
        if (s - zero).norm() < UNSTABLE_RADIUS {
            return Err(Error::Unstable(format!(
                "{s} is within {UNSTABLE_RADIUS:e} of a zero of 1 - 2^(1-s)"
            )));
        }
    }
    Ok(())
}

fn term_count(s: Complex64) -> Result<usize> {
    // ln(Gamma(sigma) / |Gamma(s)|), clamping sigma away from the pole at 0.
    let sigma = s.re.max(1e-3);
    let ln_gamma_sigma = log_gamma(Complex64::new(sigma, 0.0))?.re;
    let ln_gamma_s = match log_gamma(s) {
        Ok(v) => v.re,
        // 1 / Gamma vanishes at s = 0.
        Err(Error::Pole(_)) => 0.0,
        Err(e) => return Err(e),
    };
    // d_n >= (3 + sqrt 8)^n / 2
    let growth = (3.0 + 8.0_f64.sqrt()).ln();
    let needed = (ln_gamma_sigma - ln_gamma_s + (2.0 / ETA_TOLERANCE).ln()) / growth;
    let n = (needed.ceil().max(0.0) as usize).max(MIN_TERMS);
    if n > MAX_TERMS {
        return Err(Error::domain(format!(
            "|Im s| too large for the alternating-series evaluator at {s}"
        )));
    }
    Ok(n)
}

/// Weights `1 - d_k / d_n`, k = 0..n.
fn chebyshev_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut partial = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += term;
        partial.push(acc);
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    let total = partial[n];
    partial[..n].iter().map(|d| 1.0 - d / total).collect()
}
