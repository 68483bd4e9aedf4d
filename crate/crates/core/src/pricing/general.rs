use std::time::Instant;

use super::{assemble, one_level_hyp, time_to_maturity, PriceResult, Truncation};
use crate::error::Result;
use crate::shortrate::ShortRateModel;
use crate::specfun::KrawtchoukContext;

/// Bond price for any `alpha, beta` in `(0, 1]`.
///
/// For one ball started in urn `y`,
///
/// `P_y = 1 + sum_{n=1}^{M} (-h tau)^n / n! sum_{i in {0,1}^n} K_y(i_n)
///        prod_j pi_{i_j} B_{i_{j-1}, i_j} 1F1(1; n+1; -lambda (alpha+beta) tau (i_1..i_n))`
///
/// with `i_0 = 0` and `K`, `pi`, `B` the single-ball (`N = 1`) Krawtchouk
/// quantities. The `1F1` argument only depends on how many indices are one,
/// so the tuple weights are accumulated by a recursion over
/// `(i_n, number of ones)` rather than by enumerating `2^n` tuples.
pub fn price_general(
    model: &ShortRateModel,
    t: f64,
    maturity: f64,
    r: f64,
    trunc: Truncation,
) -> Result<PriceResult> {
    let start = Instant::now();
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

    let params = model.ehrenfest();
    let ball = KrawtchoukContext::new(1, params.p())?;
    let pi = [ball.pi(0), ball.pi(1)];
    let mut transfer = [[0.0; 2]; 2];
    let mut kraw = [[0.0; 2]; 2];
    for a in 0..2u32 {
        for b in 0..2u32 {
            transfer[a as usize][b as usize] = pi[b as usize] * ball.krawtchouk_b(a, b)?;
            kraw[a as usize][b as usize] = ball.krawtchouk(a, b)?;
        }
    }

    let decay = -params.speed() * tau;
    let x = -model.step() * tau;
    let outer = trunc.outer as usize;

    // weights[last][ones] for tuples of the current length
    let mut weights = [vec![1.0], vec![0.0]];
    let mut coef = 1.0;
    let mut sums = [1.0f64; 2];
    let mut hyper_tail = [0.0f64; 2];
    let mut last_kept = [0.0f64; 2];
    let mut first_dropped = [0.0f64; 2];

    for n in 1..=outer + 1 {
        let mut next = [vec![0.0; n + 1], vec![0.0; n + 1]];
        for last in 0..2 {
            for (ones, &w) in weights[last].iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                next[0][ones] += w * transfer[last][0];
                next[1][ones + 1] += w * transfer[last][1];
            }
        }
        weights = next;
        coef *= x / n as f64;

        let mut inner = [0.0f64; 2];
        let mut tail = [0.0f64; 2];
        for (ones, (&w0, &w1)) in weights[0].iter().zip(&weights[1]).enumerate().take(n + 1) {
            let by_start = [0, 1].map(|y| kraw[y][0] * w0 + kraw[y][1] * w1);
            if by_start.iter().all(|&s| s == 0.0) {
                continue;
            }
            let hyp = one_level_hyp(n, ones, decay, trunc.hyper)?;
            for y in 0..2 {
                inner[y] += by_start[y] * hyp.value;
                tail[y] += by_start[y].abs() * hyp.last_term;
            }
        }
        for y in 0..2 {
            let term = coef * inner[y];
            if n <= outer {
                sums[y] += term;
                hyper_tail[y] += coef.abs() * tail[y];
                last_kept[y] = term.abs();
            } else {
                first_dropped[y] = term.abs();
            }
        }
    }

    let errors = [0, 1].map(|y| last_kept[y].max(first_dropped[y]) + hyper_tail[y]);
    let (price, error_estimate) = assemble(-model.r_min() * tau, model.n(), k, sums, errors)?;
    Ok(PriceResult {
        price,
        truncation: trunc,
        error_estimate,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
