use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type WeightFn = dyn Fn(u64) -> f64 + Send + Sync;

/// Weight sequence `w(n) > 0` with `c1/n^2 <= w(n) <= c2/n^2`.
///
/// Id 0 is reserved for the default `1/(n(n+1))`; the id is what the Gram
/// cache records.
#[derive(Clone)]
pub struct WeightScheme {
    id: u32,
    name: String,
    weight: Arc<WeightFn>,
    c1: f64,
    c2: f64,
}

/// Number of leading indices checked against the `c1, c2` envelope.
const ENVELOPE_SAMPLE: u64 = 10_000;

impl WeightScheme {
    pub const DEFAULT_ID: u32 = 0;
    pub const INVERSE_SQUARE_ID: u32 = 1;

    /// `1 / (n (n + 1))`.
    pub fn harmonic() -> Self {
        WeightScheme {
            id: Self::DEFAULT_ID,
            name: "harmonic".into(),
            weight: Arc::new(|n| 1.0 / (n as f64 * (n as f64 + 1.0))),
            c1: 0.5,
            c2: 1.0,
        }
    }

    /// `1 / n^2`.
    pub fn inverse_square() -> Self {
        WeightScheme {
            id: Self::INVERSE_SQUARE_ID,
            name: "inverse-square".into(),
            weight: Arc::new(|n| 1.0 / (n as f64 * n as f64)),
            c1: 0.5,
            c2: 1.0,
        }
    }

    /// A caller-supplied weight, checked against `c1/n^2 <= w(n) <= c2/n^2`
    /// on `n = 1..=10^4`.
    pub fn custom<F>(id: u32, name: &str, c1: f64, c2: f64, weight: F) -> Result<Self>
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        if id == Self::DEFAULT_ID {
            return Err(Error::domain("weight id 0 is reserved for 1/(n(n+1))"));
        }
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(Error::domain(format!("need 0 < c1 <= c2, got {c1}, {c2}")));
        }
        for n in 1..=ENVELOPE_SAMPLE {
            let w = weight(n);
            let n2 = (n as f64) * (n as f64);
            if !(w.is_finite() && w * n2 >= c1 * (1.0 - 1e-12) && w * n2 <= c2 * (1.0 + 1e-12)) {
                return Err(Error::domain(format!(
                    "weight {name} leaves the [{c1}, {c2}]/n^2 envelope at n = {n}"
                )));
            }
        }
        Ok(WeightScheme {
            id,
            name: name.into(),
            weight: Arc::new(weight),
            c1,
            c2,
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_default(&self) -> bool {
        self.id == Self::DEFAULT_ID
    }

    pub fn envelope(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    #[inline]
    pub fn w(&self, n: u64) -> f64 {
        (self.weight)(n)
    }

    /// Upper bound on `sum_{n > cutoff} w(n)`; exact for the default weight.
    pub fn tail_bound(&self, cutoff: u64) -> f64 {
        if self.is_default() {
            1.0 / (cutoff as f64 + 1.0)
        } else {
            self.c2 / cutoff.max(1) as f64
        }
    }
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self::harmonic()
    }
}

impl fmt::Debug for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightScheme")
            .field("id", &self.id)
            .field("name", &self.name)
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .finish()
    }
}
