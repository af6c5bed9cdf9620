//! Fixed verification suites with JSON-ready reports, one per family of
//! identities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use crate::analytic::{self, grids, CLAIM_PIECES};
use crate::arith::{sieve_moebius, verify_recurrence};
use crate::criterion::{assemble_gram, distance, moebius_residual, BasisSelection, DistanceMethod, GramStore};
use crate::error::{Error, Result};
use crate::seqspace::{apply_t, norm_m, sequence_of, PiecewiseConstant, Tail};
use crate::specfun::{xi, xi_inequality_check};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub parameters: serde_json::Value,
    pub grid_id: String,
    pub max_residual: f64,
    pub budget: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn new(check: &str, parameters: serde_json::Value, grid_id: &str, max_residual: f64, budget: f64) -> Self {
        VerificationReport {
            check: check.into(),
            parameters,
            grid_id: grid_id.into(),
            max_residual,
            budget,
            pass: max_residual <= budget,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Mellin,
    Semigroup,
    Xi,
    Unitary,
    Moebius,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Mellin, Suite::Semigroup, Suite::Xi, Suite::Unitary, Suite::Moebius];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Mellin => "mellin",
            Suite::Semigroup => "semigroup",
            Suite::Xi => "xi",
            Suite::Unitary => "unitary",
            Suite::Moebius => "moebius",
        }
    }

    pub fn run(self) -> Result<Vec<VerificationReport>> {
        match self {
            Suite::Mellin => mellin_suite(),
            Suite::Semigroup => semigroup_suite(),
            Suite::Xi => xi_suite(),
            Suite::Unitary => unitary_suite(),
            Suite::Moebius => moebius_suite(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite {s:?}")))
    }
}

pub const CLAIM_LAMBDAS: [f64; 4] = [0.5, 1.0 / 3.0, 0.2, 0.7];
pub const CLAIM_BUDGET: f64 = 1e-8;

fn mellin_suite() -> Result<Vec<VerificationReport>> {
    let grid = grids::claim_grid();
    CLAIM_LAMBDAS
        .iter()
        .map(|&lambda| {
            let (residual, tail) = analytic::verify_claim(lambda, &grid.points)?;
            Ok(VerificationReport::new(
                "mellin-claim",
                json!({ "lambda": lambda, "pieces": CLAIM_PIECES, "tail_bound": tail }),
                grid.id,
                residual,
                CLAIM_BUDGET,
            ))
        })
        .collect()
}

fn semigroup_suite() -> Result<Vec<VerificationReport>> {
    let grid = grids::semigroup_grid();
    let mut out = Vec::new();
    for (lambda, mu) in [(0.5, 1.0 / 3.0), (0.7, 0.25), (1.0, 0.6)] {
        out.push(VerificationReport::new(
            "multiplier-identity",
            json!({ "lambda": lambda, "mu": mu }),
            grid.id,
            analytic::semigroup_identity_check(lambda, mu, &grid.points)?,
            1e-10,
        ));
    }
    let ts = grids::inner_t_grid();
    out.push(VerificationReport::new(
        "inner-function",
        json!({ "mu": 0.5 }),
        "t-21-v1",
        analytic::inner_function_check(0.5, &ts)?,
        1e-14,
    ));
    out.push(VerificationReport::new(
        "theta-product",
        json!({ "lambda": 0.5, "mu": 0.4 }),
        grid.id,
        analytic::theta_product_check(0.5, 0.4, &grid.points)?,
        1e-14,
    ));
    Ok(out)
}

/// `max |xi(s) - xi(1-s)| / max(1, |xi(s)|)` over the grid.
pub fn functional_equation_residual(grid: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &s in grid {
        let a = xi(s)?;
        let b = xi(1.0 - s)?;
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
    }
    Ok(worst)
}

fn xi_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let grid = grids::xi_default_grid();
    for eps in [0.1, 0.25] {
        let report = xi_inequality_check(&grid.points, eps)?;
        // relative excess of |xi(s)| over |xi(s + eps)|, zero when none
        let worst = report
            .rows
            .iter()
            .map(|r| (-r.margin / r.abs_xi.max(r.abs_xi_shifted).max(f64::MIN_POSITIVE)).max(0.0))
            .fold(0.0, f64::max);
        let mut rep = VerificationReport::new(
            "xi-inequality",
            json!({ "eps": eps, "violations": report.violations.len() }),
            grid.id,
            worst,
            1e-9,
        );
        rep.pass = report.passed();
        out.push(rep);
    }
    let fe = grids::functional_equation_grid();
    out.push(VerificationReport::new(
        "xi-functional-equation",
        json!({}),
        fe.id,
        functional_equation_residual(&fe.points)?,
        1e-8,
    ));
    Ok(out)
}

/// 100 random step functions with 50 pieces, fixed seed.
pub fn random_step_functions(count: usize, pieces: usize, seed: u64) -> Vec<PiecewiseConstant> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let head = (0..pieces).map(|_| rng.gen_range(-1.0..1.0)).collect();
            PiecewiseConstant::new(head, Tail::Zero)
        })
        .collect()
}

fn unitary_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    let fs = random_step_functions(100, 50, 2024);
    let mut worst: f64 = 0.0;
    for f in &fs {
        let m = norm_m(f, 50)?.value;
        let h: NeumaierSum = sequence_of(f, 50)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let n = (i + 1) as f64;
                v * v / (n * (n + 1.0))
            })
            .collect();
        worst = worst.max((m - h.value()).abs());
    }
    out.push(VerificationReport::new(
        "unitary-norm",
        json!({ "functions": 100, "pieces": 50, "seed": 2024 }),
        "random-step-100-v1",
        worst,
        1e-14,
    ));

    let mut worst: f64 = 0.0;
    for m in 1..=10u64 {
        for n in 1..=10u64 {
            let lhs = apply_t(m, &PiecewiseConstant::indicator(n)?)?;
            let rhs = PiecewiseConstant::indicator(m * n)?.scale((m as f64).sqrt());
            for k in 1..=1000 {
                worst = worst.max((lhs.piece(k).unwrap_or(f64::NAN) - rhs.piece(k).unwrap_or(f64::NAN)).abs());
            }
        }
    }
    out.push(VerificationReport::new(
        "t-indicator",
        json!({ "m_max": 10, "n_max": 10 }),
        "pieces-1000-v1",
        worst,
        0.0,
    ));

    let mut worst: f64 = 0.0;
    for l in 1..=10u64 {
        for m in 1..=10u64 {
            let lhs = apply_t(m, &PiecewiseConstant::g(l)?)?;
            let g_lm = PiecewiseConstant::g(l * m)?;
            let g_m = PiecewiseConstant::g(m)?;
            let root = (m as f64).sqrt();
            for n in 1..=1000 {
                let (a, b, c) = (lhs.piece(n), g_lm.piece(n), g_m.piece(n));
                let rhs = root * (b.unwrap_or(f64::NAN) - c.unwrap_or(f64::NAN) / l as f64);
                worst = worst.max((a.unwrap_or(f64::NAN) - rhs).abs());
            }
        }
    }
    out.push(VerificationReport::new(
        "t-fractional",
        json!({ "l_max": 10, "m_max": 10 }),
        "pieces-1000-v1",
        worst,
        1e-12,
    ));

    let mut worst: f64 = 0.0;
    for f in fs.iter().take(10) {
        for m in 1..=10u64 {
            for n in 1..=10u64 {
                let lhs = apply_t(m, &apply_t(n, f)?)?;
                let rhs = apply_t(m * n, f)?;
                for k in 1..=(rhs.head().len() as u64 + 10) {
                    let d = lhs.piece(k).unwrap_or(f64::NAN) - rhs.piece(k).unwrap_or(f64::NAN);
                    worst = worst.max(d.abs());
                }
            }
        }
    }
    out.push(VerificationReport::new(
        "t-semigroup",
        json!({ "functions": 10, "m_max": 10, "n_max": 10 }),
        "random-step-100-v1",
        worst,
        1e-12,
    ));
    Ok(out)
}

pub const RESIDUAL_LS: [u64; 4] = [2, 10, 50, 100];
pub const RESIDUAL_EPS: [f64; 3] = [0.0, 0.1, 0.5];

fn moebius_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let table = sieve_moebius(10_000)?;
    let ok = verify_recurrence(&table, 10_000);
    out.push(VerificationReport::new(
        "moebius-recurrence",
        json!({ "n_max": 10_000 }),
        "none",
        if ok { 0.0 } else { 1.0 },
        0.0,
    ));

    let mut store = GramStore::closed();
    assemble_gram(100, BasisSelection::All, &mut store)?;
    let mut worst: f64 = 0.0;
    for &l in &RESIDUAL_LS {
        let d2 = distance(&store, l, BasisSelection::All, DistanceMethod::LeastSquares)?.d2;
        for &eps in &RESIDUAL_EPS {
            let r = moebius_residual(&store, l, eps, &table)?;
            worst = worst.max(d2 - r);
        }
    }
    out.push(VerificationReport::new(
        "moebius-residual-dominance",
        json!({ "L": RESIDUAL_LS, "eps": RESIDUAL_EPS }),
        "none",
        worst.max(0.0),
        1e-10,
    ));
    let ln2 = std::f64::consts::LN_2;
    let r2 = moebius_residual(&store, 2, 0.0, &table)?;
    out.push(VerificationReport::new(
        "moebius-residual-two",
        json!({ "L": 2, "eps": 0.0 }),
        "none",
        (r2 - (1.0 - ln2 + ln2 / 4.0)).abs(),
        1e-10,
    ));
    Ok(out)
}
