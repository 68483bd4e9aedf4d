use statrs::function::gamma::ln_gamma;

use super::time_to_maturity;
use crate::ehrenfest::{path_rng, walk, BirthDeathRates};
use crate::error::{Error, Result};
use crate::shortrate::ShortRateModel;

/// Largest `N` accepted by [`price_fk_oracle`].
pub const FK_DEFAULT_CAP: u32 = 400;

/// Feynman–Kac price `[exp(tau (Q - D)) 1]_k` on the finite chain, where `Q`
/// is the generator and `D = diag(r_0, ..., r_N)`.
pub fn price_fk_oracle(model: &ShortRateModel, t: f64, maturity: f64, r: f64) -> Result<f64> {
    price_fk_oracle_with_cap(model, t, maturity, r, FK_DEFAULT_CAP)
}

/// As [`price_fk_oracle`] with an explicit bound on `N`.
///
/// Uses uniformization: with `A = Q - diag(h i)` and `L >= max_i |A_ii|`,
/// `P = I + A / L` is entrywise non-negative and
/// `exp(tau A) 1 = sum_m Poisson(m; L tau) P^m 1`. No term can cancel, so
/// the result is accurate to rounding.
pub fn price_fk_oracle_with_cap(
    model: &ShortRateModel,
    t: f64,
    maturity: f64,
    r: f64,
    cap: u32,
) -> Result<f64> {
    let n = model.n();
    if n > cap {
        return Err(Error::Capability(format!(
            "N = {n} exceeds the oracle limit {cap}"
        )));
    }
    let tau = time_to_maturity(t, maturity)?;
    let k = model.rate_to_state(r)? as usize;
    let base = (-model.r_min() * tau).exp();
    if tau == 0.0 || model.is_degenerate() {
        return Ok(base);
    }

    let rates = BirthDeathRates::new(model.ehrenfest());
    let h = model.step();
    let size = n as usize + 1;
    let diag: Vec<f64> = (0..size)
        .map(|i| rates.total(i as u32) + h * i as f64)
        .collect();
    let unif = diag.iter().cloned().fold(0.0, f64::max);

    let mu = unif * tau;
    let last = (mu + 10.0 * mu.sqrt() + 20.0).ceil() as usize;
    let mut v = vec![1.0; size];
    let mut next = vec![0.0; size];
    let mut total = 0.0;
    for m in 0..=last {
        let log_weight = -mu + m as f64 * mu.ln() - ln_gamma(m as f64 + 1.0);
        total += log_weight.exp() * v[k];
        for i in 0..size {
            let mut acc = (1.0 - diag[i] / unif) * v[i];
            if i + 1 < size {
                acc += rates.birth[i] / unif * v[i + 1];
            }
            if i > 0 {
                acc += rates.death[i] / unif * v[i - 1];
            }
            next[i] = acc;
        }
        std::mem::swap(&mut v, &mut next);
    }
    Ok(base * total)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Averages `exp(-int_t^T R_s ds)` over `paths` exact simulations. Path `i`
/// uses stream `i` of the generator seeded by `seed`, so results do not
/// depend on how paths are scheduled.
pub fn price_mc_oracle(
    model: &ShortRateModel,
    t: f64,
    maturity: f64,
    r: f64,
    paths: u64,
    seed: u64,
) -> Result<McEstimate> {
    if paths == 0 {
        return Err(Error::param("paths", "must be at least 1"));
    }
    let tau = time_to_maturity(t, maturity)?;
    let k = model.rate_to_state(r)?;
    let base = (-model.r_min() * tau).exp();
    if tau == 0.0 || model.is_degenerate() {
        return Ok(McEstimate {
            estimate: base,
            std_error: 0.0,
        });
    }

    let rates = BirthDeathRates::new(model.ehrenfest());
    let h = model.step();
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for i in 0..paths {
        let mut rng = path_rng(seed, i);
        let mut area = 0.0;
        walk(k, tau, &rates, &mut rng, |s, e, state| {
            area += state as f64 * (e - s)
        });
        let x = base * (-h * area).exp();
        // Welford update
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let std_error = if paths > 1 {
        (m2 / (paths - 1) as f64 / paths as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(McEstimate {
        estimate: mean,
        std_error,
    })
}
