use std::fmt;

use crate::error::{Error, Result};

/// `gamma` (the constant sequence 1) or `gamma_l = ({n/l})_{n >= 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FractionalSequence {
    Constant,
    Frac(u64),
}

impl FractionalSequence {
    pub fn frac(l: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("gamma_l needs l >= 1"));
        }
        Ok(FractionalSequence::Frac(l))
    }

    /// Period in `n`; 1 for the constant sequence.
    pub fn period(&self) -> u64 {
        match *self {
            FractionalSequence::Constant => 1,
            FractionalSequence::Frac(l) => l,
        }
    }

    /// `gamma_1` is the zero sequence.
    pub fn is_zero(&self) -> bool {
        *self == FractionalSequence::Frac(1)
    }

    /// Term `n` as an exact ratio `(numerator, denominator)`.
    #[inline]
    pub fn term_ratio(&self, n: u64) -> (u64, u64) {
        match *self {
            FractionalSequence::Constant => (1, 1),
            FractionalSequence::Frac(l) => (n % l, l),
        }
    }

    #[inline]
    pub fn term(&self, n: u64) -> f64 {
        let (num, den) = self.term_ratio(n);
        num as f64 / den as f64
    }
}

impl fmt::Display for FractionalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FractionalSequence::Constant => write!(f, "gamma"),
            FractionalSequence::Frac(l) => write!(f, "gamma_{l}"),
        }
    }
}
