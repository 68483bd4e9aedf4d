//! Continuous-time Ehrenfest short-rate model.
//!
//! The short rate is an affine image `R_t = h X_t + r_m` of a continuous-time
//! Ehrenfest process `X_t` on `{0, ..., N}`. The crate provides
//!
//! - [`specfun`]: partitions, Schur functions, truncated `1F1` of matrix
//!   argument and Krawtchouk polynomials,
//! - [`ehrenfest`]: transition semigroup, moments, stationary law and exact
//!   path simulation of the underlying chain,
//! - [`shortrate`]: the rate grid and rate-space moments,
//! - [`pricing`]: zero-coupon bond prices (general and symmetric series
//!   formulas, Vasicek closed form, Feynman–Kac and Monte Carlo oracles),
//! - [`experiments`]: convergence sweeps against Vasicek and the low-rate
//!   case study, with CSV output.
//!
//! All rates are decimals (`0.05` is five percent), times are in years.

pub mod ehrenfest;
pub mod error;
pub mod experiments;
pub mod pricing;
pub mod shortrate;
pub mod specfun;

pub use ehrenfest::{BirthDeathRates, EhrenfestParams, PathSample};
pub use error::{Error, Result};
pub use pricing::{PriceResult, Truncation, VasicekParams};
pub use shortrate::ShortRateModel;
