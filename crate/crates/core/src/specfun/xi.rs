use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{ensure_finite, log_gamma, zeta, zeta_deflated};
use crate::error::{Error, Result};

/// Real-part window `[lo, hi]` accepted by [`xi`].
pub const XI_WINDOW: (f64, f64) = (-2.5, 3.5);

/// Relative accuracy of `xi`, used as the comparison slack of the
/// inequality check.
const XI_RELATIVE_TOLERANCE: f64 = 1e-9;

/// `xi(s) = s (1 - s) pi^(-s/2) Gamma(s/2) zeta(s)`, entire.
///
/// Evaluated as `-2 pi^(-s/2) Gamma(1 + s/2) (s - 1) zeta(s)` for
/// `sigma >= 0` and through `xi(s) = xi(1 - s)` otherwise. At `s = 0, 1` the
/// value is the limit `2 zeta(0)`.
pub fn xi(s: Complex64) -> Result<Complex64> {
    ensure_finite(s)?;
    if s.re < XI_WINDOW.0 || s.re > XI_WINDOW.1 {
        return Err(Error::domain(format!(
            "xi evaluated for sigma in [{}, {}], got {s}",
            XI_WINDOW.0, XI_WINDOW.1
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if s == zero || s == one {
        return Ok(2.0 * zeta(zero)?);
    }
    if s.re < 0.0 {
        return xi(1.0 - s);
    }
    let half = 0.5 * s;
    let log_factor = -half * PI.ln() + log_gamma(half + 1.0)?;
    Ok(-2.0 * log_factor.exp() * zeta_deflated(s)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct XiInequalityRow {
    pub sigma: f64,
    pub t: f64,
    pub abs_xi: f64,
    pub abs_xi_shifted: f64,
    /// `|xi(s + eps)| - |xi(s)|`; negative beyond the slack is a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct XiInequalityReport {
    pub eps: f64,
    pub rows: Vec<XiInequalityRow>,
    /// Indices into `rows` where `|xi(s)| > |xi(s + eps)| + slack`.
    pub violations: Vec<usize>,
}

impl XiInequalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|xi(s)| <= |xi(s + eps)|` on points of the closed half-plane
/// `sigma >= 1/2`.
pub fn xi_inequality_check(grid: &[Complex64], eps: f64) -> Result<XiInequalityReport> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut violations = Vec::new();
    for (i, &s) in grid.iter().enumerate() {
        ensure_finite(s)?;
        if s.re < 0.5 {
            return Err(Error::domain(format!("{s} is outside sigma >= 1/2")));
        }
        let abs_xi = xi(s)?.norm();
        let abs_xi_shifted = xi(s + eps)?.norm();
        let margin = abs_xi_shifted - abs_xi;
        let slack = XI_RELATIVE_TOLERANCE * abs_xi.max(abs_xi_shifted);
        if -margin > slack {
            violations.push(i);
        }
        rows.push(XiInequalityRow {
            sigma: s.re,
            t: s.im,
            abs_xi,
            abs_xi_shifted,
            margin,
        });
    }
    Ok(XiInequalityReport {
        eps,
        rows,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `s (1-s) pi^(-s/2) Gamma(s/2) zeta(s)` evaluated literally.
    fn xi_literal(s: Complex64) -> Complex64 {
        let g = (log_gamma(0.5 * s).unwrap() - 0.5 * s * PI.ln()).exp();
        s * (1.0 - s) * g * zeta(s).unwrap()
    }

    #[test]
    fn limit_values() {
        let at_zero = xi(c(0.0, 0.0)).unwrap();
        assert!((at_zero.re + 1.0).abs() < 1e-12);
        assert_eq!(xi(c(1.0, 0.0)).unwrap(), at_zero);
        // continuity into the removable points
        assert!((xi(c(1e-7, 0.0)).unwrap() - at_zero).norm() < 1e-6);
        assert!((xi(c(1.0 - 1e-7, 1e-7)).unwrap() - at_zero).norm() < 1e-6);
    }

    #[test]
    fn matches_literal_product_away_from_poles() {
        for s in [c(0.3, 2.0), c(0.5, 14.1), c(2.0, 0.0), c(1.7, -8.0)] {
            let a = xi(s).unwrap();
            let b = xi_literal(s);
            assert!(((a - b) / b).norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn real_on_critical_line_and_conjugate_symmetric() {
        let a = xi(c(0.5, 14.1)).unwrap();
        let b = xi(c(0.5, -14.1)).unwrap();
        assert!((a - b).norm() <= 1e-9 * a.norm());
        assert!(a.im.abs() <= 1e-9 * a.norm());
    }

    #[test]
    fn functional_equation_off_line() {
        for s in [c(0.1, 3.0), c(0.9, -25.0), c(-1.5, 4.0), c(2.5, 1.0)] {
            let a = xi(s).unwrap();
            let b = xi(1.0 - s).unwrap();
            assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "s = {s}");
        }
    }

    #[test]
    fn window_enforced() {
        assert!(xi(c(-3.0, 0.0)).is_err());
        assert!(xi(c(4.0, 0.0)).is_err());
    }

    #[test]
    fn inequality_examples() {
        let grid: Vec<_> = [1.0, 5.0, 10.0].iter().map(|&t| c(0.5, t)).collect();
        let report = xi_inequality_check(&grid, 0.1).unwrap();
        assert!(report.passed());
        assert_eq!(report.rows.len(), 3);
        assert!(xi_inequality_check(&[c(2.0, 0.0)], 0.25).unwrap().passed());
        let empty = xi_inequality_check(&[], 0.1).unwrap();
        assert!(empty.rows.is_empty() && empty.passed());
    }

    #[test]
    fn inequality_rejects_bad_input() {
        assert!(xi_inequality_check(&[c(0.4, 1.0)], 0.1).is_err());
        assert!(xi_inequality_check(&[c(0.6, 1.0)], 0.5).is_err());
        assert!(xi_inequality_check(&[c(0.6, 1.0)], 0.0).is_err());
    }
}
