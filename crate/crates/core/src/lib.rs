//! Numerical experiments around the sequence-space form of the Nyman-Beurling
//! criterion for the Riemann hypothesis.
//!
//! The crate computes the weighted-l2 distance `D(L)` from the constant
//! sequence to the span of the fractional-part sequences `n -> {n/l}`,
//! Moebius-weighted approximants to it, and numerical checks of the analytic
//! identities behind the criterion (Mellin transforms, multiplicative
//! semigroups, the xi functional equation).
//!
//! Modules, bottom-up:
//! - [`specfun`]: digamma, complex log-gamma, zeta, xi.
//! - [`arith`]: Moebius sieve, lcm.
//! - [`seqspace`]: the weighted sequence space and piecewise-constant functions.
//! - [`criterion`]: Gram matrices, distances, Moebius residuals.
//! - [`analytic`]: Mellin transforms and Hardy-space identities.
//! - [`suites`]: fixed-grid verification reports.

pub mod analytic;
pub mod arith;
pub mod criterion;
pub mod error;
pub mod seqspace;
pub mod specfun;
pub mod suites;
pub mod sum;

pub use error::{Error, Result};
