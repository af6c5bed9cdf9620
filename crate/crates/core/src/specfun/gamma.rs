use std::f64::consts::PI;

use num_complex::Complex64;

use super::ensure_finite;
use crate::error::{Error, Result};

/// `B_{2k} / (2k (2k - 1))` for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Minimum modulus at which the Stirling series is summed.
const STIRLING_RADIUS: f64 = 15.0;

/// Complex log-gamma, continued analytically from the positive real axis.
///
/// Arguments are shifted into `Re z >= 0, |z| >= 15` with
/// `ln Gamma(z) = ln Gamma(z + n) - sum ln(z + k)` and then summed with the
/// Stirling series through the `B_16` term.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::Pole(format!("log_gamma at nonpositive integer {}", s.re)));
    }

    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.0 || z.norm() < STIRLING_RADIUS {
        shift += z.ln();
        z += 1.0;
    }

    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;

    let half_ln_two_pi = 0.5 * (2.0 * PI).ln();
    Ok((z - 0.5) * z.ln() - z + half_ln_two_pi + series - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert_eq!(half.im, 0.0);
        let four = log_gamma(c(4.0, 0.0)).unwrap();
        assert!((four.re - 6.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn factorials_along_real_axis() {
        let mut ln_fact = 0.0;
        for n in 1..=100u32 {
            let got = log_gamma(c(n as f64, 0.0)).unwrap();
            let rel = ((got.re - ln_fact) / ln_fact.max(1.0)).abs();
            assert!(rel < 1e-14, "n = {n}");
            ln_fact += (n as f64).ln();
        }
    }

    #[test]
    fn recurrence_in_the_plane() {
        // Gamma(s + 1) = s Gamma(s), checked through exp.
        let points = [c(0.3, 0.7), c(-0.7, 2.0), c(0.5, 14.1), c(2.5, -40.0), c(-0.9, 0.01)];
        for s in points {
            let lhs = log_gamma(s + 1.0).unwrap().exp();
            let rhs = s * log_gamma(s).unwrap().exp();
            assert!(((lhs - rhs) / rhs).norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn reflection_formula() {
        // Gamma(s) Gamma(1 - s) = pi / sin(pi s)
        for s in [c(0.25, 1.0), c(0.5, 10.0), c(0.1, -3.0), c(-0.5, 0.5)] {
            let prod = (log_gamma(s).unwrap() + log_gamma(1.0 - s).unwrap()).exp();
            let expected = PI / (s * PI).sin();
            assert!(((prod - expected) / expected).norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn modulus_on_critical_line() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for t in [0.0, 1.0, 5.0, 20.0, 60.0] {
            let lg = log_gamma(c(0.5, t)).unwrap();
            let expected = 0.5 * (PI.ln() - (PI * t).cosh().ln());
            assert!((lg.re - expected).abs() < 1e-12 * expected.abs().max(1.0), "t = {t}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let s = c(0.75, 3.0);
        let a = log_gamma(s).unwrap();
        let b = log_gamma(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn poles_rejected() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(n, 0.0)), Err(Error::Pole(_))));
        }
        assert!(log_gamma(c(-1.0, 1e-9)).is_ok());
    }
}
