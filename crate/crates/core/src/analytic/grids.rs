//! Fixed evaluation grids. Changing any point requires bumping the id so
//! recorded reports stay comparable.

use num_complex::Complex64;

/// A named, versioned list of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub id: &'static str,
    pub points: Vec<Complex64>,
}

fn product(id: &'static str, sigmas: &[f64], ts: &[f64]) -> Grid {
    let points = sigmas
        .iter()
        .flat_map(|&sigma| ts.iter().map(move |&t| Complex64::new(sigma, t)))
        .collect();
    Grid { id, points }
}

/// 16 points in `sigma in [0.6, 3]`, `|t| <= 10`.
pub fn claim_grid() -> Grid {
    product("claim-16-v1", &[0.6, 0.75, 1.5, 3.0], &[-10.0, -2.5, 2.5, 10.0])
}

/// 20 points in the open half-plane `sigma > 1/2`.
pub fn semigroup_grid() -> Grid {
    product(
        "semigroup-20-v1",
        &[0.55, 0.8, 1.25, 2.0],
        &[-9.0, -1.0, 0.5, 4.0, 15.0],
    )
}

/// 101 points `1/2 + it`, `t = -20, -19.6, ..., 20`.
pub fn critical_line_grid() -> Grid {
    let points = (0..=100)
        .map(|k| Complex64::new(0.5, -20.0 + 0.4 * k as f64))
        .collect();
    Grid {
        id: "critical-line-101-v1",
        points,
    }
}

/// Default grid on the closed half-plane `sigma >= 1/2`, including the
/// first zeta zero.
pub fn xi_default_grid() -> Grid {
    product(
        "xi-omega-63-v1",
        &[0.5, 0.6, 0.75, 1.0, 1.5, 2.0, 3.0],
        &[0.0, 1.0, 5.0, 10.0, 14.134_725_141_734_693, 17.5, 21.022_039_638_771_555, 25.0, 30.0],
    )
}

/// 50 points in `sigma in [0.1, 0.9]`, `|t| <= 30` for the functional
/// equation.
pub fn functional_equation_grid() -> Grid {
    product(
        "fe-50-v1",
        &[0.1, 0.3, 0.5, 0.7, 0.9],
        &[-30.0, -20.0, -12.0, -5.0, -1.0, 1.0, 5.0, 12.0, 20.0, 30.0],
    )
}

/// `t` values for the inner-function check, `-10..=10`.
pub fn inner_t_grid() -> Vec<f64> {
    (-10..=10).map(f64::from).collect()
}
