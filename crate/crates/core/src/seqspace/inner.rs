use serde::{Deserialize, Serialize};

use super::{FractionalSequence, WeightScheme};
use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::specfun::digamma;
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Truncated,
}

impl Method {
    pub fn code(self) -> u8 {
        match self {
            Method::ClosedForm => 0,
            Method::Truncated => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Method::ClosedForm),
            1 => Some(Method::Truncated),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Truncated => "truncated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerProductResult {
    pub value: f64,
    pub method: Method,
    /// Bound on `|value - <a, b>|`; zero for closed forms.
    pub error_bound: f64,
}

impl InnerProductResult {
    fn zero(method: Method) -> Self {
        InnerProductResult {
            value: 0.0,
            method,
            error_bound: 0.0,
        }
    }
}

/// `sum_{n <= cutoff} a_n b_n w(n)` with the tail bounded by
/// `sum_{n > cutoff} w(n)` (all terms lie in `[0, 1]`).
pub fn inner_product_truncated(
    a: FractionalSequence,
    b: FractionalSequence,
    cutoff: u64,
    weight: &WeightScheme,
) -> Result<InnerProductResult> {
    if cutoff == 0 {
        return Err(Error::domain("truncation cutoff must be at least 1"));
    }
    let error_bound = weight.tail_bound(cutoff);
    if a.is_zero() || b.is_zero() {
        return Ok(InnerProductResult {
            error_bound: 0.0,
            ..InnerProductResult::zero(Method::Truncated)
        });
    }

    let (pa, pb) = (a.period(), b.period());
    let denom = (pa * pb) as f64;
    let default = weight.is_default();
    let mut acc = NeumaierSum::new();
    // residues n mod pa, n mod pb tracked incrementally
    let (mut ra, mut rb) = (1 % pa, 1 % pb);
    for n in 1..=cutoff {
        let num_a = if a == FractionalSequence::Constant { 1 } else { ra };
        let num_b = if b == FractionalSequence::Constant { 1 } else { rb };
        let prod = num_a * num_b;
        if prod != 0 {
            let nf = n as f64;
            let w = if default { 1.0 / (nf * (nf + 1.0)) } else { weight.w(n) };
            acc.add(prod as f64 / denom * w);
        }
        ra += 1;
        if ra == pa {
            ra = 0;
        }
        rb += 1;
        if rb == pb {
            rb = 0;
        }
    }
    Ok(InnerProductResult {
        value: acc.value(),
        method: Method::Truncated,
        error_bound,
    })
}

/// Exact inner product under the default weight.
///
/// Splitting `n` into residue classes mod `P = lcm(period_a, period_b)`,
/// `sum_{k >= 0} 1/((kP + r)(kP + r + 1)) = (psi((r+1)/P) - psi(r/P)) / P`,
/// so `<a, b> = sum_{r=1}^{P} a_r b_r (psi((r+1)/P) - psi(r/P)) / P`.
/// Costs `P + 1` digamma evaluations.
pub fn inner_product_closed(
    a: FractionalSequence,
    b: FractionalSequence,
    weight: &WeightScheme,
) -> Result<InnerProductResult> {
    if !weight.is_default() {
        return Err(Error::Unsupported(format!(
            "closed-form inner products need the 1/(n(n+1)) weight, got {}",
            weight.name()
        )));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(InnerProductResult::zero(Method::ClosedForm));
    }
    if a == FractionalSequence::Constant && b == FractionalSequence::Constant {
        // sum 1/(n(n+1)) telescopes
        return Ok(InnerProductResult {
            value: 1.0,
            ..InnerProductResult::zero(Method::ClosedForm)
        });
    }
    let (pa, pb) = (a.period(), b.period());
    let p = lcm(pa, pb)?;
    let pf = p as f64;
    let denom = (pa * pb) as f64;

    let mut acc = NeumaierSum::new();
    let mut psi_lo = digamma(1.0 / pf)?;
    let (mut ra, mut rb) = (1 % pa, 1 % pb);
    for r in 1..=p {
        let psi_hi = digamma((r + 1) as f64 / pf)?;
        let num_a = if a == FractionalSequence::Constant { 1 } else { ra };
        let num_b = if b == FractionalSequence::Constant { 1 } else { rb };
        let prod = num_a * num_b;
        if prod != 0 {
            acc.add(prod as f64 / denom * (psi_hi - psi_lo));
        }
        psi_lo = psi_hi;
        ra += 1;
        if ra == pa {
            ra = 0;
        }
        rb += 1;
        if rb == pb {
            rb = 0;
        }
    }
    Ok(InnerProductResult {
        value: acc.value() / pf,
        method: Method::ClosedForm,
        error_bound: 0.0,
    })
}
