use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Values of a piecewise-constant function on pieces beyond the explicit head.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    Zero,
    Constant(f64),
    /// Piece `k` takes `values[k % values.len()]`.
    Periodic(Vec<f64>),
    /// Values unknown but bounded in modulus.
    Bounded(f64),
    /// No information about the tail.
    Unknown,
}

impl Tail {
    fn piece(&self, k: u64) -> Option<f64> {
        match self {
            Tail::Zero => Some(0.0),
            Tail::Constant(c) => Some(*c),
            Tail::Periodic(v) => Some(v[(k % v.len() as u64) as usize]),
            Tail::Bounded(_) | Tail::Unknown => None,
        }
    }

    fn sup(&self) -> Option<f64> {
        match self {
            Tail::Zero => Some(0.0),
            Tail::Constant(c) => Some(c.abs()),
            Tail::Periodic(v) => Some(v.iter().fold(0.0, |m, x| m.max(x.abs()))),
            Tail::Bounded(b) => Some(*b),
            Tail::Unknown => None,
        }
    }
}

/// Element of `M`: `f(x) = c_n` on `(1/(n+1), 1/n]`.
///
/// Pieces `1..=head.len()` are stored explicitly; later pieces follow the
/// [`Tail`] rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    head: Vec<f64>,
    tail: Tail,
}

impl PiecewiseConstant {
    pub fn new(head: Vec<f64>, tail: Tail) -> Self {
        PiecewiseConstant { head, tail }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        Self::new(Vec::new(), Tail::Constant(1.0))
    }

    /// Indicator of `(0, 1/n]`.
    pub fn indicator(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("indicator index must be at least 1"));
        }
        Ok(Self::new(vec![0.0; (n - 1) as usize], Tail::Constant(1.0)))
    }

    /// `g_l(x) = {1/(lx)} - {1/x}/l`, which equals `{n/l}` on piece `n`.
    pub fn g(l: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("g_l needs l >= 1"));
        }
        let period = (0..l).map(|j| j as f64 / l as f64).collect();
        Ok(Self::new(Vec::new(), Tail::Periodic(period)))
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Value on piece `n` (`n >= 1`), i.e. `f(1/n)`; `None` if the tail is
    /// not pinned down there.
    pub fn piece(&self, n: u64) -> Option<f64> {
        assert!(n >= 1, "pieces are indexed from 1");
        match self.head.get((n - 1) as usize) {
            Some(v) => Some(*v),
            None => self.tail.piece(n),
        }
    }

    /// `f(x)` for `x` in `(0, 1]`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        assert!(x > 0.0 && x <= 1.0, "x = {x} outside (0, 1]");
        let mut n = (1.0 / x).floor() as u64;
        // guard the rounding of 1/x near piece boundaries
        if (n as f64) * x > 1.0 {
            n -= 1;
        } else if ((n + 1) as f64) * x <= 1.0 {
            n += 1;
        }
        self.piece(n.max(1))
    }

    pub fn scale(&self, c: f64) -> Self {
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Constant(v) => Tail::Constant(c * v),
            Tail::Periodic(v) => Tail::Periodic(v.iter().map(|x| c * x).collect()),
            Tail::Bounded(b) => Tail::Bounded(c.abs() * b),
            Tail::Unknown => Tail::Unknown,
        };
        Self::new(self.head.iter().map(|x| c * x).collect(), tail)
    }
}

/// `U(f) = (f(1/n))_{n = 1..=len}`.
pub fn sequence_of(f: &PiecewiseConstant, len: u64) -> Result<Vec<f64>> {
    (1..=len)
        .map(|n| {
            f.piece(n)
                .ok_or_else(|| Error::domain(format!("piece {n} is not determined by the tail")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    /// `int |f|^2` over `(1/(cutoff+1), 1]`, plus the tail when it is known
    /// exactly.
    pub value: f64,
    /// Bound on the part of `int |f|^2` over `(0, 1/(cutoff+1)]` not in
    /// `value`.
    pub tail_bound: f64,
}

/// Squared `L^2((0,1])` norm, summing `c_n^2 * |(1/(n+1), 1/n]|` over
/// `n <= cutoff`.
pub fn norm_m(f: &PiecewiseConstant, cutoff: u64) -> Result<NormResult> {
    let mut acc = NeumaierSum::new();
    for n in 1..=cutoff {
        let c = match f.piece(n) {
            Some(c) => c,
            None => {
                // |f| <= b beyond the head: bound the rest of the head range too
                return bounded_remainder(f, n, acc);
            }
        };
        if c != 0.0 {
            let nf = n as f64;
            acc.add(c * c * (1.0 / nf - 1.0 / (nf + 1.0)));
        }
    }
    let rest = 1.0 / (cutoff as f64 + 1.0);
    match &f.tail {
        Tail::Zero if f.head.len() as u64 <= cutoff => Ok(NormResult {
            value: acc.value(),
            tail_bound: 0.0,
        }),
        Tail::Constant(c) if f.head.len() as u64 <= cutoff => {
            acc.add(c * c * rest);
            Ok(NormResult {
                value: acc.value(),
                tail_bound: 0.0,
            })
        }
        _ => {
            let head_sup = f
                .head
                .iter()
                .skip(cutoff as usize)
                .fold(0.0_f64, |m, x| m.max(x.abs()));
            let sup = f
                .tail
                .sup()
                .ok_or_else(|| Error::domain("norm needs a bounded tail descriptor"))?
                .max(head_sup);
            Ok(NormResult {
                value: acc.value(),
                tail_bound: sup * sup * rest,
            })
        }
    }
}

fn bounded_remainder(
    f: &PiecewiseConstant,
    first_unknown: u64,
    acc: NeumaierSum,
) -> Result<NormResult> {
    let sup = f
        .tail
        .sup()
        .ok_or_else(|| Error::domain("norm needs a bounded tail descriptor"))?;
    Ok(NormResult {
        value: acc.value(),
        tail_bound: sup * sup / first_unknown as f64,
    })
}

/// `(T_m f)(x) = sqrt(m) f(mx)` on `(0, 1/m]`, zero on `(1/m, 1]`.
///
/// Piece `n` of the image is zero for `n < m` and `sqrt(m) c_{floor(n/m)}`
/// otherwise, since `(m/(n+1), m/n]` lies inside piece `floor(n/m)`.
pub fn apply_t(m: u64, f: &PiecewiseConstant) -> Result<PiecewiseConstant> {
    if m == 0 {
        return Err(Error::domain("T_m needs m >= 1"));
    }
    if m == 1 {
        return Ok(f.clone());
    }
    let root = (m as f64).sqrt();
    let head_len = f.head.len() as u64;
    let out_len = if head_len == 0 { m - 1 } else { m * (head_len + 1) - 1 };
    let head = (1..=out_len)
        .map(|n| {
            if n < m {
                0.0
            } else {
                root * f.head[(n / m - 1) as usize]
            }
        })
        .collect();
    let tail = match &f.tail {
        Tail::Zero => Tail::Zero,
        Tail::Constant(c) => Tail::Constant(root * c),
        Tail::Periodic(v) => {
            let p = v.len() as u64;
            Tail::Periodic(
                (0..m * p)
                    .map(|j| root * v[((j / m) % p) as usize])
                    .collect(),
            )
        }
        Tail::Bounded(b) => Tail::Bounded(root * b),
        Tail::Unknown => Tail::Unknown,
    };
    Ok(PiecewiseConstant::new(head, tail))
}
