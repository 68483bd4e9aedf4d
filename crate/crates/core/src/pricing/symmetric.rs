use std::time::Instant;

use super::{assemble, one_level_hyp, time_to_maturity, PriceResult, Truncation};
use crate::error::{Error, Result};
use crate::shortrate::ShortRateModel;

/// Bond price for the symmetric chain `alpha = beta = 1`.
///
/// With `w = h tau`, `F(d, j, v) = 1F1(1; d+1; (v,..,v,0,..,0))` (`j` copies
/// of `v` among `d` entries) and `c_n = (lambda tau)^(2n) / (2n)!`,
///
/// `P_1 = sum_n c_n [e^{-w} F(2n, n, w) + lambda tau/(2n+1) F(2n+1, n+1, -w)]`
/// `P_0 = sum_n c_n [F(2n, n, -w) + lambda tau/(2n+1) e^{-w} F(2n+1, n+1, w)]`
///
/// and the price is `exp(-(r_m + lambda N) tau) P_1^k P_0^(N-k)`.
pub fn price_symmetric(
    model: &ShortRateModel,
    t: f64,
    maturity: f64,
    r: f64,
    trunc: Truncation,
) -> Result<PriceResult> {
    let start = Instant::now();
    let params = model.ehrenfest();
    if !params.is_symmetric() {
        return Err(Error::Model(format!(
            "symmetric formula needs alpha = beta = 1, got alpha = {}, beta = {}",
            params.alpha(),
            params.beta()
        )));
    }
    let tau = time_to_maturity(t, maturity)?;
    let k = model.rate_to_state(r)?;
    if tau == 0.0 {
        return Ok(PriceResult::exact(1.0, trunc, start.elapsed()));
    }
    if model.is_degenerate() {
        return Ok(PriceResult::exact(
            (-model.r_min() * tau).exp(),
            trunc,
            start.elapsed(),
        ));
    }

    let lt = params.lambda() * tau;
    let w = model.step() * tau;
    let damp = (-w).exp();
    let outer = trunc.outer as usize;

    let mut coef = 1.0;
    let mut sums = [0.0f64; 2];
    let mut hyper_tail = [0.0f64; 2];
    let mut last_kept = [0.0f64; 2];
    let mut first_dropped = [0.0f64; 2];
    for n in 0..=outer + 1 {
        if n > 0 {
            let m = 2.0 * n as f64;
            coef *= lt * lt / ((m - 1.0) * m);
        }
        let odd = lt / (2 * n + 1) as f64;
        let even_up = one_level_hyp(2 * n, n, w, trunc.hyper)?;
        let even_down = one_level_hyp(2 * n, n, -w, trunc.hyper)?;
        let odd_up = one_level_hyp(2 * n + 1, n + 1, w, trunc.hyper)?;
        let odd_down = one_level_hyp(2 * n + 1, n + 1, -w, trunc.hyper)?;

        let terms = [
            coef * (even_down.value + odd * damp * odd_up.value),
            coef * (damp * even_up.value + odd * odd_down.value),
        ];
        let tails = [
            coef * (even_down.last_term + odd * damp * odd_up.last_term),
            coef * (damp * even_up.last_term + odd * odd_down.last_term),
        ];
        for y in 0..2 {
            if n <= outer {
                sums[y] += terms[y];
                hyper_tail[y] += tails[y];
                last_kept[y] = terms[y].abs();
            } else {
                first_dropped[y] = terms[y].abs();
            }
        }
    }

    let errors = [0, 1].map(|y| last_kept[y].max(first_dropped[y]) + hyper_tail[y]);
    let n = model.n();
    let log_prefactor = -(model.r_min() + params.lambda() * n as f64) * tau;
    let (price, error_estimate) = assemble(log_prefactor, n, k, sums, errors)?;
    Ok(PriceResult {
        price,
        truncation: trunc,
        error_estimate,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
