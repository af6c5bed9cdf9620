//! Special functions: real digamma, complex log-gamma, the zeta function on
//! the closed right half-plane and the completed function xi.
//!
//! Every function here is pure and thread-safe.

mod digamma;
mod gamma;
mod xi;
mod zeta;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use digamma::digamma;
pub use gamma::log_gamma;
pub use xi::{xi, xi_inequality_check, XiInequalityReport, XiInequalityRow, XI_WINDOW};
pub use zeta::{eta, zeta, zeta_deflated};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `2 + C - ln(4 pi)`, the constant in the conjectured asymptotic
/// `D^2(L) ~ A / ln L`.
pub const ASYMPTOTIC_A: f64 = 0.046_191_417_932_242_07;

/// A point `s = sigma + i t` of the complex plane.
pub type ComplexValue = Complex64;

/// Builds a `ComplexValue`, rejecting non-finite components.
pub fn complex(re: f64, im: f64) -> Result<ComplexValue> {
    let s = Complex64::new(re, im);
    ensure_finite(s)?;
    Ok(s)
}

pub(crate) fn ensure_finite(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("non-finite argument {s}")))
    }
}

/// Regions of the plane used as preconditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalDomain {
    /// `sigma > 0`, `s != 1`.
    RightHalfPlane,
    /// `sigma >= 1/2`, the closure of the zero-free half-plane under RH.
    ClosedCriticalHalfPlane,
    /// Closed rectangle `[sigma_min, sigma_max] x [t_min, t_max]`.
    Custom {
        sigma_min: f64,
        sigma_max: f64,
        t_min: f64,
        t_max: f64,
    },
}

impl EvalDomain {
    pub fn contains(&self, s: Complex64) -> bool {
        match *self {
            EvalDomain::RightHalfPlane => s.re > 0.0 && s != Complex64::new(1.0, 0.0),
            EvalDomain::ClosedCriticalHalfPlane => s.re >= 0.5,
            EvalDomain::Custom {
                sigma_min,
                sigma_max,
                t_min,
                t_max,
            } => s.re >= sigma_min && s.re <= sigma_max && s.im >= t_min && s.im <= t_max,
        }
    }

    pub fn check(&self, s: Complex64) -> Result<()> {
        ensure_finite(s)?;
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::domain(format!("{s} outside {self:?}")))
        }
    }
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn expm1(z: Complex64) -> Complex64 {
    let (sin_y, cos_y) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * cos_y - 2.0 * half * half,
        z.re.exp() * sin_y,
    )
}

/// `(exp(z) - 1) / z`, equal to 1 at `z = 0`.
pub(crate) fn expm1_over(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        // 1 + z/2 + z^2/6 + z^3/24
        Complex64::new(1.0, 0.0) + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        expm1(z) / z
    }
}
