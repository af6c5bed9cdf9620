//! The distance engine: Gram assembly with a persistent cache, `D^2(L)` by
//! least squares or by a ratio of Gram determinants, and Moebius-weighted
//! approximant residuals.

mod gram;
pub mod linalg;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub use gram::{assemble_gram, GramMethod, GramStore};
use linalg::{condition_estimate, lu_log_det, Cholesky, Matrix};

use crate::arith::{sieve_moebius, MoebiusTable};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Ridge shifts tried in order when the pruned Gram matrix fails to factor.
pub const RIDGE_LADDER: [f64; 4] = [0.0, 1e-14, 1e-12, 1e-10];

/// Which `gamma_l` span the distance is taken to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisSelection {
    /// `l = 1..=L`
    All,
    /// `l = 2..=L`
    ExcludeOne,
    /// square-free `l <= L`
    SquareFree,
}

impl BasisSelection {
    pub fn indices(self, l_max: u64) -> Result<Vec<u64>> {
        Ok(match self {
            BasisSelection::All => (1..=l_max).collect(),
            BasisSelection::ExcludeOne => (2..=l_max).collect(),
            BasisSelection::SquareFree => {
                let table = sieve_moebius(l_max.max(1) as usize)?;
                table
                    .squarefree_up_to(l_max as usize)
                    .into_iter()
                    .map(|l| l as u64)
                    .collect()
            }
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisSelection::All => "all",
            BasisSelection::ExcludeOne => "exclude-one",
            BasisSelection::SquareFree => "square-free",
        }
    }
}

impl fmt::Display for BasisSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BasisSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(BasisSelection::All),
            "exclude-one" => Ok(BasisSelection::ExcludeOne),
            "square-free" => Ok(BasisSelection::SquareFree),
            _ => Err(Error::domain(format!("unknown basis {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    /// `D^2 = <gamma, gamma> - g^T G^{-1} g` via Cholesky.
    LeastSquares,
    /// `D^2 = det G+ / det G` with `G+` the Gram matrix bordered by `gamma`.
    GramDetRatio,
}

impl DistanceMethod {
    pub fn label(self) -> &'static str {
        match self {
            DistanceMethod::LeastSquares => "ls",
            DistanceMethod::GramDetRatio => "det",
        }
    }
}

impl fmt::Display for DistanceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    #[serde(rename = "L")]
    pub l: u64,
    pub basis: BasisSelection,
    pub d2: f64,
    pub method: DistanceMethod,
    pub cond_estimate: f64,
    pub ridge_used: f64,
    /// `d2 * ln L`, zero for `L = 1`.
    pub a_est: f64,
    /// The pruned span is `{0}`; `d2` is then `<gamma, gamma>`.
    pub degenerate: bool,
    /// Basis indices dropped as zero or duplicate columns.
    pub pruned: Vec<u64>,
}

/// Drops zero columns (`gamma_1`) and exact duplicates of earlier columns.
fn prune(store: &GramStore, indices: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let entry = |l: u64, m: u64| store.get(l, m).map(|r| r.value).unwrap_or(f64::NAN);
    let mut kept: Vec<u64> = Vec::new();
    let mut pruned = Vec::new();
    for &l in indices {
        let zero = entry(l, l) == 0.0;
        let duplicate = kept.iter().any(|&k| {
            entry(k, k) == entry(l, l)
                && entry(k, l) == entry(l, l)
                && indices.iter().all(|&j| entry(k, j) == entry(l, j))
        });
        if zero || duplicate {
            pruned.push(l);
        } else {
            kept.push(l);
        }
    }
    (kept, pruned)
}

/// `D^2(L)` over the chosen basis, reading Gram entries from `store`.
///
/// The store must already hold the basis (see [`assemble_gram`]).
pub fn distance(
    store: &GramStore,
    l_max: u64,
    basis: BasisSelection,
    method: DistanceMethod,
) -> Result<DistanceReport> {
    if l_max == 0 {
        return Err(Error::domain("L must be at least 1"));
    }
    let indices = basis.indices(l_max)?;
    if !store.contains_basis(&indices) {
        return Err(Error::domain(format!(
            "Gram store lacks entries for L = {l_max} ({basis}); assemble first"
        )));
    }
    let self_ip = store.gamma_self()?.value;
    let (kept, pruned) = prune(store, &indices);
    let a_est_of = |d2: f64| if l_max >= 2 { d2 * (l_max as f64).ln() } else { 0.0 };

    if kept.is_empty() {
        return Ok(DistanceReport {
            l: l_max,
            basis,
            d2: self_ip,
            method,
            cond_estimate: 1.0,
            ridge_used: 0.0,
            a_est: a_est_of(self_ip),
            degenerate: true,
            pruned,
        });
    }

    let n = kept.len();
    let gram = Matrix::from_fn(n, |i, j| store.get(kept[i], kept[j]).expect("checked").value);
    let g: Vec<f64> = kept
        .iter()
        .map(|&l| store.gamma_cross(l).map(|r| r.value))
        .collect::<Result<_>>()?;

    let mut factored = None;
    for ridge in RIDGE_LADDER {
        let shifted = gram.add_diagonal(ridge);
        if let Some(chol) = Cholesky::factor(&shifted) {
            factored = Some((ridge, shifted, chol));
            break;
        }
    }
    let Some((ridge_used, shifted, chol)) = factored else {
        // crude: trace over the largest ridge tried
        let lambda_max = (0..n).map(|i| gram.get(i, i)).sum::<f64>();
        return Err(Error::Conditioning {
            cond: lambda_max / RIDGE_LADDER[RIDGE_LADDER.len() - 1],
        });
    };
    let cond_estimate = condition_estimate(&shifted, &chol);

    let d2 = match method {
        DistanceMethod::LeastSquares => {
            let c = chol.solve(&g);
            let mut acc = NeumaierSum::new();
            acc.add(self_ip);
            for (gi, ci) in g.iter().zip(&c) {
                acc.add(-gi * ci);
            }
            acc.value()
        }
        DistanceMethod::GramDetRatio => {
            let bordered = Matrix::from_fn(n + 1, |i, j| match (i, j) {
                (0, 0) => self_ip,
                (0, j) => g[j - 1],
                (i, 0) => g[i - 1],
                (i, j) => shifted.get(i - 1, j - 1),
            });
            let (sign_b, log_b) = lu_log_det(&bordered);
            let (sign_g, log_g) = lu_log_det(&shifted);
            if sign_g <= 0.0 {
                return Err(Error::Conditioning {
                    cond: cond_estimate,
                });
            }
            if sign_b <= 0.0 {
                // the bordered determinant underflowed past zero: distance is
                // below working precision
                0.0
            } else {
                (log_b - log_g).exp()
            }
        }
    };

    Ok(DistanceReport {
        l: l_max,
        basis,
        d2,
        method,
        cond_estimate,
        ridge_used,
        a_est: a_est_of(d2),
        degenerate: false,
        pruned,
    })
}

/// Reports for each `L` in ascending `l_values`; a failing row does not stop
/// the sweep.
pub fn distance_sweep(
    store: &mut GramStore,
    l_values: &[u64],
    basis: BasisSelection,
    method: DistanceMethod,
) -> Result<Vec<Result<DistanceReport>>> {
    if l_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sweep L values must be strictly ascending"));
    }
    let Some(&top) = l_values.last() else {
        return Ok(Vec::new());
    };
    assemble_gram(top, basis, store)?;
    let shared = &*store;
    Ok(l_values
        .par_iter()
        .map(|&l| distance(shared, l, basis, method))
        .collect())
}

/// `||gamma - v||^2` for `v = -sum_{l <= L} mu(l) l^(-eps) gamma_l`,
/// expanded over Gram entries. Needs square-free pairs up to `L` in `store`.
pub fn moebius_residual(store: &GramStore, l_max: u64, eps: f64, table: &MoebiusTable) -> Result<f64> {
    if l_max == 0 || l_max as usize > table.limit() {
        return Err(Error::domain(format!(
            "L = {l_max} outside the Moebius table range 1..={}",
            table.limit()
        )));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be a finite nonnegative number, got {eps}")));
    }
    let terms: Vec<(u64, f64)> = (1..=l_max)
        .filter_map(|l| {
            let mu = table.mu(l as usize);
            (mu != 0).then(|| (l, f64::from(mu) * (l as f64).powf(-eps)))
        })
        .collect();

    let mut acc = NeumaierSum::new();
    acc.add(store.gamma_self()?.value);
    for (i, &(l, cl)) in terms.iter().enumerate() {
        acc.add(2.0 * cl * store.gamma_cross(l)?.value);
        for &(m, cm) in &terms[i..] {
            let entry = store.get(l, m).ok_or_else(|| {
                Error::domain(format!("Gram store lacks ({l}, {m}); assemble the square-free basis"))
            })?;
            let mult = if l == m { 1.0 } else { 2.0 };
            acc.add(mult * cl * cm * entry.value);
        }
    }
    Ok(acc.value())
}
