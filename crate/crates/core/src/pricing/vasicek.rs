use rand_distr::{Distribution, StandardNormal};

use super::time_to_maturity;
use crate::ehrenfest::{path_rng, EhrenfestParams};
use crate::error::{Error, Result};
use crate::shortrate::ShortRateModel;

/// Vasicek model `dr = k (theta - r) dt + sigma dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekParams {
    pub k: f64,
    pub theta: f64,
    pub sigma: f64,
    pub r0: f64,
}

impl VasicekParams {
    pub fn new(k: f64, theta: f64, sigma: f64, r0: f64) -> Result<Self> {
        let params = VasicekParams {
            k,
            theta,
            sigma,
            r0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::param("k", format!("{} must be positive", self.k)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::param(
                "sigma",
                format!("{} must be positive", self.sigma),
            ));
        }
        if !self.theta.is_finite() {
            return Err(Error::param(
                "theta",
                format!("{} is not finite", self.theta),
            ));
        }
        if !self.r0.is_finite() {
            return Err(Error::param("r0", format!("{} is not finite", self.r0)));
        }
        Ok(())
    }

    /// Long-run variance `sigma^2 / (2k)`.
    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (2.0 * self.k)
    }
}

/// Closed-form price `A exp(-B r)` with `B = (1 - e^{-k tau}) / k` and
/// `A = exp((theta - sigma^2 / (2k^2)) (B - tau) - sigma^2 B^2 / (4k))`.
pub fn price_vasicek(params: &VasicekParams, t: f64, maturity: f64, r: f64) -> Result<f64> {
    params.validate()?;
    let tau = time_to_maturity(t, maturity)?;
    let VasicekParams {
        k, theta, sigma, ..
    } = *params;
    let b = -(-k * tau).exp_m1() / k;
    let log_a =
        (theta - sigma * sigma / (2.0 * k * k)) * (b - tau) - sigma * sigma * b * b / (4.0 * k);
    Ok((log_a - b * r).exp())
}

/// How the per-ball intensity is chosen when mapping Vasicek onto the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntensityConvention {
    /// `lambda (alpha + beta) = k`, i.e. `lambda = k / 2`: the rate mean
    /// relaxes like `e^{-kt}` exactly as under Vasicek.
    #[default]
    MomentMatched,
    /// `lambda = alpha / (alpha + beta) = 1/2`, independent of `k`.
    Literal,
}

/// Symmetric chain with `r_m, r_M = theta -/+ sigma sqrt(N / (2k))`, so the
/// stationary mean is `theta` and the stationary variance `sigma^2 / (2k)`.
pub fn vasicek_to_ehrenfest(params: &VasicekParams, n: u32) -> Result<ShortRateModel> {
    vasicek_to_ehrenfest_with(params, n, IntensityConvention::default())
}

pub fn vasicek_to_ehrenfest_with(
    params: &VasicekParams,
    n: u32,
    convention: IntensityConvention,
) -> Result<ShortRateModel> {
    params.validate()?;
    let lambda = match convention {
        IntensityConvention::MomentMatched => params.k / 2.0,
        IntensityConvention::Literal => 0.5,
    };
    let ehrenfest = EhrenfestParams::new(n, lambda, 1.0, 1.0)?;
    let half_width = params.sigma * (n as f64 / (2.0 * params.k)).sqrt();
    ShortRateModel::new(
        ehrenfest,
        params.theta - half_width,
        params.theta + half_width,
    )
}

/// Euler–Maruyama path of the Vasicek rate on `steps` equal steps, returned
/// as `(time, rate)` pairs including both endpoints.
pub fn simulate_vasicek_euler(
    params: &VasicekParams,
    horizon: f64,
    steps: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Domain(format!(
            "horizon = {horizon} must be positive"
        )));
    }
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    let dt = horizon / steps as f64;
    let vol = params.sigma * dt.sqrt();
    let mut rng = path_rng(seed, 0);
    let mut r = params.r0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, r));
    for i in 1..=steps {
        let z: f64 = StandardNormal.sample(&mut rng);
        r += params.k * (params.theta - r) * dt + vol * z;
        out.push((i as f64 * dt, r));
    }
    Ok(out)
}
