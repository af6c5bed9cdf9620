//! The weighted sequence space `H` (weights `1/(n(n+1))`), the sequences
//! `gamma = (1, 1, ...)` and `gamma_l = ({n/l})`, their inner products, and
//! the piecewise-constant function space `M` that `H` is unitarily
//! equivalent to.

mod inner;
mod piecewise;
mod sequence;
mod weight;

pub use inner::{inner_product_closed, inner_product_truncated, InnerProductResult, Method};
pub use piecewise::{apply_t, norm_m, sequence_of, NormResult, PiecewiseConstant, Tail};
pub use sequence::FractionalSequence;
pub use weight::WeightScheme;
