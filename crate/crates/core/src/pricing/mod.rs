//! Zero-coupon bond pricing.
//!
//! The price at `t` of a bond paying one unit at `T`, given `R_t = r`, is
//! `E[exp(-int_t^T R_s ds) | R_t = r]`. The balls of the Ehrenfest chain move
//! independently, so the expectation factors into single-ball quantities:
//! `exp(-r_m (T - t)) P_1^k P_0^(N - k)` with `k` the state of `r` and `P_y`
//! the discount factor contributed by one ball started in urn `y`.
//!
//! [`price_general`] evaluates `P_y` by a series over binary index tuples with
//! a `1F1` of matrix argument per tuple; [`price_symmetric`] uses the
//! specialised series for `alpha = beta = 1`. Both truncate the outer series
//! at order `M` and each `1F1` at partition weight `H`.
//!
//! [`price_fk_oracle`] and [`price_mc_oracle`] compute the same expectation
//! by uniformization of the killed generator and by exact simulation.

mod general;
mod oracle;
mod symmetric;
mod vasicek;

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{hyp1f1_matrix, MatrixArg, SeriesSum};

pub use general::price_general;
pub use oracle::{
    price_fk_oracle, price_fk_oracle_with_cap, price_mc_oracle, McEstimate, FK_DEFAULT_CAP,
};
pub use symmetric::price_symmetric;
pub use vasicek::{
    price_vasicek, simulate_vasicek_euler, vasicek_to_ehrenfest, vasicek_to_ehrenfest_with,
    IntensityConvention, VasicekParams,
};

/// Truncation orders: `outer` is `M`, `hyper` is `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub outer: u32,
    pub hyper: u32,
}

impl Truncation {
    pub const fn new(outer: u32, hyper: u32) -> Self {
        Truncation { outer, hyper }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::new(10, 30)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceResult {
    pub price: f64,
    pub truncation: Truncation,
    /// Estimated absolute truncation error of `price`.
    pub error_estimate: f64,
    pub wall_time_s: f64,
}

impl PriceResult {
    fn exact(price: f64, truncation: Truncation, elapsed: Duration) -> Self {
        PriceResult {
            price,
            truncation,
            error_estimate: 0.0,
            wall_time_s: elapsed.as_secs_f64(),
        }
    }
}

/// Validates `t <= T` and returns `T - t`.
pub(crate) fn time_to_maturity(t: f64, maturity: f64) -> Result<f64> {
    if !t.is_finite() || !maturity.is_finite() {
        return Err(Error::Domain(format!(
            "times must be finite (t = {t}, T = {maturity})"
        )));
    }
    if maturity < t {
        return Err(Error::Domain(format!(
            "maturity T = {maturity} precedes t = {t}"
        )));
    }
    Ok(maturity - t)
}

/// `1F1(1; dim + 1; z)` with `ones` entries of `z` equal to `value`, rest zero.
pub(crate) fn one_level_hyp(dim: usize, ones: usize, value: f64, order: u32) -> Result<SeriesSum> {
    hyp1f1_matrix(
        1.0,
        dim as f64 + 1.0,
        &MatrixArg::two_level(dim, ones, value),
        order,
    )
}

/// Combines the two single-ball factors into the bond price in log space.
///
/// `errors[y]` bounds the truncation error of `factors[y]`; the returned
/// estimate propagates both to first order and adds a rounding floor.
pub(crate) fn assemble(
    log_prefactor: f64,
    n: u32,
    k: u32,
    factors: [f64; 2],
    errors: [f64; 2],
) -> Result<(f64, f64)> {
    for (y, &f) in factors.iter().enumerate() {
        let used = if y == 1 { k } else { n - k };
        if used > 0 && !(f.is_finite() && f > 0.0) {
            return Err(Error::Numerical(format!(
                "single-ball factor P_{y} = {f} is not positive; increase the truncation orders"
            )));
        }
    }
    let (k, rest) = (k as f64, (n - k) as f64);
    let mut log_price = log_prefactor;
    let mut relative = 0.0;
    if k > 0.0 {
        log_price += k * factors[1].ln();
        relative += k * errors[1] / factors[1];
    }
    if rest > 0.0 {
        log_price += rest * factors[0].ln();
        relative += rest * errors[0] / factors[0];
    }
    let price = log_price.exp();
    let rounding = f64::EPSILON * (n as f64 + 1.0);
    Ok((price, price * (relative + rounding)))
}
