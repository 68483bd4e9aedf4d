//! The continuous-time Ehrenfest process.
//!
//! `N` balls move independently between two urns. Each ball carries a Poisson
//! clock of intensity `lambda`; at a ring it jumps from urn II to urn I with
//! probability `alpha` and from urn I to urn II with probability `beta`.
//! `X_t` counts the balls in urn I. Equivalently `X_t` is a birth-and-death
//! chain on `{0, ..., N}` with rates `lambda * alpha * (N - i)` and
//! `lambda * beta * i`.
//!
//! The law of the process depends on `(alpha, beta, lambda)` only through
//! `p = alpha / (alpha + beta)` and the speed `lambda * (alpha + beta)`.
//!
//! Path simulation uses ChaCha8 (`rand_chacha`), which produces the same
//! stream on every platform for a given seed. Path `k` of a batch draws from
//! stream `k` of the seeded generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::specfun::KrawtchoukContext;

/// Parameters `(N, lambda, alpha, beta)` of the Ehrenfest process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhrenfestParams {
    n: u32,
    lambda: f64,
    alpha: f64,
    beta: f64,
}

impl EhrenfestParams {
    /// Requires `N >= 1`, `lambda > 0` and `alpha, beta` in `(0, 1]`.
    pub fn new(n: u32, lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("N", "must be at least 1"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::param("lambda", format!("{lambda} must be positive")));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::param(name, format!("{v} is not in (0,1]")));
            }
        }
        Ok(EhrenfestParams {
            n,
            lambda,
            alpha,
            beta,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Stationary probability of a single ball being in urn I.
    pub fn p(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn q(&self) -> f64 {
        self.beta / (self.alpha + self.beta)
    }

    /// Relaxation speed `lambda * (alpha + beta)`.
    pub fn speed(&self) -> f64 {
        self.lambda * (self.alpha + self.beta)
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha == 1.0 && self.beta == 1.0
    }

    pub fn krawtchouk(&self) -> KrawtchoukContext {
        KrawtchoukContext::new(self.n, self.p()).expect("validated parameters")
    }

    fn check_state(&self, name: &str, i: u32) -> Result<()> {
        if i > self.n {
            Err(Error::Domain(format!(
                "{name} = {i} outside 0..={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }
}

pub(crate) fn check_time(name: &str, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {t} must be finite and non-negative"
        )))
    }
}

/// Birth and death rates of the chain, per state.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthDeathRates {
    pub birth: Vec<f64>,
    pub death: Vec<f64>,
}

impl BirthDeathRates {
    pub fn new(params: &EhrenfestParams) -> Self {
        // gamma = lambda * N, so gamma * alpha * (N - i) / N = lambda * alpha * (N - i)
        let n = params.n;
        let birth = (0..=n)
            .map(|i| params.lambda * params.alpha * (n - i) as f64)
            .collect();
        let death = (0..=n)
            .map(|i| params.lambda * params.beta * i as f64)
            .collect();
        BirthDeathRates { birth, death }
    }

    pub fn total(&self, i: u32) -> f64 {
        self.birth[i as usize] + self.death[i as usize]
    }

    /// Dense generator matrix, mostly for tests and small oracles.
    pub fn generator(&self) -> Vec<Vec<f64>> {
        let size = self.birth.len();
        let mut q = vec![vec![0.0; size]; size];
        for i in 0..size {
            if i + 1 < size {
                q[i][i + 1] = self.birth[i];
            }
            if i > 0 {
                q[i][i - 1] = self.death[i];
            }
            q[i][i] = -(self.birth[i] + self.death[i]);
        }
        q
    }
}

/// Transition matrix of a single ball, states ordered `(0, 1)`.
pub fn binary_semigroup(t: f64, params: &EhrenfestParams) -> Result<[[f64; 2]; 2]> {
    check_time("t", t)?;
    let (p, q) = (params.p(), params.q());
    let e = (-params.speed() * t).exp();
    Ok([[q + p * e, p - p * e], [q - q * e, p + q * e]])
}

/// `P(X_{s+t} = j | X_s = i)` through the Krawtchouk expansion
/// `pi_j sum_x omega(x) K_i(x) K_j(x) exp(-lambda (alpha + beta) x t)`.
pub fn transition_prob(i: u32, j: u32, t: f64, params: &EhrenfestParams) -> Result<f64> {
    params.check_state("i", i)?;
    params.check_state("j", j)?;
    check_time("t", t)?;
    let ctx = params.krawtchouk();
    let c = params.speed();
    let sum: f64 = (0..=params.n)
        .map(|x| {
            ctx.omega(x)
                * ctx.eval_binomial_sum(i, x)
                * ctx.eval_binomial_sum(j, x)
                * (-c * x as f64 * t).exp()
        })
        .sum();
    Ok(clamp_roundoff(ctx.pi(j) * sum))
}

/// Full transition matrix `P(t)`, row `i` is the law of `X_t` given `X_0 = i`.
pub fn transition_matrix(t: f64, params: &EhrenfestParams) -> Result<Vec<Vec<f64>>> {
    check_time("t", t)?;
    let ctx = params.krawtchouk();
    let n = params.n;
    let size = n as usize + 1;
    let c = params.speed();
    let k: Vec<Vec<f64>> = (0..=n)
        .map(|l| (0..=n).map(|x| ctx.eval_binomial_sum(l, x)).collect())
        .collect();
    let decay: Vec<f64> = (0..=n)
        .map(|x| ctx.omega(x) * (-c * x as f64 * t).exp())
        .collect();

    let mut out = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in 0..size {
            let sum: f64 = (0..size).map(|x| decay[x] * k[i][x] * k[j][x]).sum();
            out[i][j] = clamp_roundoff(ctx.pi(j as u32) * sum);
        }
    }
    Ok(out)
}

// Alternating Krawtchouk sums leave ~1e-16 negative residue on vanishing entries.
fn clamp_roundoff(v: f64) -> f64 {
    if v < 0.0 && v > -1e-10 {
        0.0
    } else {
        v
    }
}

/// `E[X_t | X_0 = i] = Np - (Np - i) e^{-lambda (alpha + beta) t}`.
pub fn conditional_mean(i: u32, t: f64, params: &EhrenfestParams) -> Result<f64> {
    params.check_state("i", i)?;
    check_time("t", t)?;
    let np = params.n as f64 * params.p();
    Ok(np - (np - i as f64) * (-params.speed() * t).exp())
}

/// `Var[X_t | X_0 = i]`.
///
/// Summing the variances of the `i` balls started in urn I and the `N - i`
/// started in urn II gives
/// `Npq + (2p - 1)(Np - i) e - (i q^2 + (N - i) p^2) e^2` with
/// `e = exp(-lambda (alpha + beta) t)`.
pub fn conditional_variance(i: u32, t: f64, params: &EhrenfestParams) -> Result<f64> {
    params.check_state("i", i)?;
    check_time("t", t)?;
    let n = params.n as f64;
    let (p, q) = (params.p(), params.q());
    let i = i as f64;
    let e = (-params.speed() * t).exp();
    // (1 - e) [Npq + e (i q^2 + (N - i) p^2)], each factor non-negative
    Ok((1.0 - e) * (n * p * q + e * (i * q * q + (n - i) * p * p)))
}

/// Binomial(N, p) law, the stationary and limiting distribution.
pub fn stationary_pmf(params: &EhrenfestParams) -> Vec<f64> {
    params.krawtchouk().omegas().to_vec()
}

/// A realised path: `states[k]` holds on `[times[k], times[k+1])`, the last
/// state until `horizon`. `times[0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub states: Vec<u32>,
    pub horizon: f64,
}

impl PathSample {
    /// State occupied at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> u32 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.states[idx.saturating_sub(1)]
    }

    /// `int_0^horizon X_s ds`.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for (k, &state) in self.states.iter().enumerate() {
            let end = self.times.get(k + 1).copied().unwrap_or(self.horizon);
            total += state as f64 * (end - self.times[k]);
        }
        total
    }

    pub fn jumps(&self) -> usize {
        self.states.len() - 1
    }
}

/// Generator for stream `stream` of the ChaCha8 sequence seeded by `seed`.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Event-driven exact simulation. Calls `visit(start, end, state)` for every
/// holding interval, clipped at `horizon`.
pub(crate) fn walk<R: Rng + ?Sized>(
    i0: u32,
    horizon: f64,
    rates: &BirthDeathRates,
    rng: &mut R,
    mut visit: impl FnMut(f64, f64, u32),
) {
    let mut t = 0.0;
    let mut state = i0;
    loop {
        let total = rates.total(state);
        let hold = Exp::new(total).expect("positive total rate").sample(rng);
        let next = t + hold;
        if next >= horizon {
            visit(t, horizon, state);
            return;
        }
        visit(t, next, state);
        let up = rng.random::<f64>() * total < rates.birth[state as usize];
        state = if up { state + 1 } else { state - 1 };
        t = next;
    }
}

/// Simulates `X` on `[0, horizon]` from `X_0 = i0`, deterministically in `seed`.
pub fn simulate_path(
    i0: u32,
    horizon: f64,
    params: &EhrenfestParams,
    seed: u64,
) -> Result<PathSample> {
    let mut paths = simulate_paths(i0, horizon, params, seed, 1)?;
    Ok(paths.remove(0))
}

/// `count` independent paths; path `k` draws from stream `k`, so the first
/// path equals [`simulate_path`] with the same seed.
pub fn simulate_paths(
    i0: u32,
    horizon: f64,
    params: &EhrenfestParams,
    seed: u64,
    count: u64,
) -> Result<Vec<PathSample>> {
    params.check_state("i0", i0)?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Domain(format!(
            "horizon = {horizon} must be positive"
        )));
    }
    let rates = BirthDeathRates::new(params);
    Ok((0..count)
        .map(|stream| {
            let mut rng = path_rng(seed, stream);
            let mut times = Vec::new();
            let mut states = Vec::new();
            walk(i0, horizon, &rates, &mut rng, |start, _, state| {
                times.push(start);
                states.push(state);
            });
            PathSample {
                times,
                states,
                horizon,
            }
        })
        .collect())
}
