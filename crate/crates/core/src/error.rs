use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("unstable evaluation point: {0}")]
    Unstable(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("gram matrix singular beyond ridge budget (condition estimate {cond:e})")]
    Conditioning { cond: f64 },

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
