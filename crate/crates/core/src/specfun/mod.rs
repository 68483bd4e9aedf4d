//! Special functions: partitions, normalized Schur functions, the truncated
//! confluent hypergeometric function of matrix argument and Krawtchouk
//! polynomials.

mod hypergeometric;
mod krawtchouk;
mod partition;
mod schur;

pub use hypergeometric::{check_lower_parameter, hyp1f1_matrix, hyp1f1_scalar, SeriesSum};
pub use krawtchouk::KrawtchoukContext;
pub use partition::{gen_pochhammer, pochhammer, Partition, Partitions};
pub use schur::{schur_normalized, standard_tableaux, MatrixArg, SchurEvaluator};

/// Default truncation order `H` of the hypergeometric series.
pub const DEFAULT_HYP_ORDER: u32 = 30;
