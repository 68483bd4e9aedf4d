//! Short rate as an affine image of the Ehrenfest chain,
//! `R_t = h X_t + r_m` with step `h = (r_M - r_m) / N`.

use crate::ehrenfest::{self, EhrenfestParams};
use crate::error::{Error, Result};

/// Grid tolerance for [`ShortRateModel::rate_to_state`], in units of `h`.
pub const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortRateModel {
    ehrenfest: EhrenfestParams,
    r_min: f64,
    r_max: f64,
}

impl ShortRateModel {
    /// `r_max == r_min` is allowed and gives a deterministic rate.
    pub fn new(ehrenfest: EhrenfestParams, r_min: f64, r_max: f64) -> Result<Self> {
        if !r_min.is_finite() {
            return Err(Error::param("r_m", format!("{r_min} is not finite")));
        }
        if !r_max.is_finite() || r_max < r_min {
            return Err(Error::param(
                "r_M",
                format!("{r_max} must be finite and at least r_m = {r_min}"),
            ));
        }
        Ok(ShortRateModel {
            ehrenfest,
            r_min,
            r_max,
        })
    }

    pub fn ehrenfest(&self) -> &EhrenfestParams {
        &self.ehrenfest
    }

    pub fn n(&self) -> u32 {
        self.ehrenfest.n()
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Grid spacing `h`.
    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / self.n() as f64
    }

    pub fn is_degenerate(&self) -> bool {
        self.r_max == self.r_min
    }

    /// Rate in state `k`; the top state maps to `r_M` exactly.
    pub fn rate(&self, k: u32) -> f64 {
        if k == self.n() {
            self.r_max
        } else {
            self.step() * k as f64 + self.r_min
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n()).map(|k| self.rate(k)).collect()
    }

    /// State `k` with `rate(k) = r`. Rates more than `1e-9` grid steps away
    /// from a grid point, or outside `[r_m, r_M]`, are rejected.
    pub fn rate_to_state(&self, r: f64) -> Result<u32> {
        let (nearest, position) = self.nearest(r)?;
        let off = if self.is_degenerate() {
            (r - self.r_min).abs() > GRID_TOLERANCE
        } else {
            (position - nearest as f64).abs() > GRID_TOLERANCE
        };
        if off {
            return Err(Error::OffGrid {
                rate: r,
                nearest_state: nearest,
                nearest_rate: self.rate(nearest),
            });
        }
        Ok(nearest)
    }

    /// Nearest grid state and its rate, clamped into `{0..N}`.
    pub fn snap_to_grid(&self, r: f64) -> Result<(u32, f64)> {
        let (k, _) = self.nearest(r)?;
        Ok((k, self.rate(k)))
    }

    fn nearest(&self, r: f64) -> Result<(u32, f64)> {
        if !r.is_finite() {
            return Err(Error::Domain(format!("rate {r} is not finite")));
        }
        if self.is_degenerate() {
            return Ok((0, 0.0));
        }
        let position = (r - self.r_min) / self.step();
        let k = position.round().clamp(0.0, self.n() as f64) as u32;
        Ok((k, position))
    }

    /// `E[R_t | R_0 = r0]`.
    pub fn rate_mean(&self, r0: f64, t: f64) -> Result<f64> {
        let k = self.rate_to_state(r0)?;
        Ok(self.step() * ehrenfest::conditional_mean(k, t, &self.ehrenfest)? + self.r_min)
    }

    /// `Var[R_t | R_0 = r0]`.
    pub fn rate_variance(&self, r0: f64, t: f64) -> Result<f64> {
        let k = self.rate_to_state(r0)?;
        let h = self.step();
        Ok(h * h * ehrenfest::conditional_variance(k, t, &self.ehrenfest)?)
    }

    /// Long-run mean `p r_M + (1 - p) r_m`.
    pub fn mean_reversion_level(&self) -> f64 {
        let p = self.ehrenfest.p();
        p * self.r_max + (1.0 - p) * self.r_min
    }

    /// Long-run variance `(r_M - r_m)^2 p (1 - p) / N`.
    pub fn stationary_rate_variance(&self) -> f64 {
        let width = self.r_max - self.r_min;
        let p = self.ehrenfest.p();
        width * width * p * (1.0 - p) / self.n() as f64
    }
}
