//! GARCH(1,1)-adaptive Kalman filter.
//!
//! The GARCH recursion models the variance of the state increment, so its shock
//! is the previous filtered increment `x_hat_{k-1} - x_hat_{k-2}`:
//!
//! ```text
//! sigma2_k = a0 + a1 * d_{k-1}^2 + b1 * sigma2_{k-1}
//! ```
//!
//! With the defaults (`a0 = 1`, `a1 = 0.3`, `b1 = 0.6`, `r = 10`) the recursion
//! settles near 5 on jump-free stretches: at `sigma2 = 5` the steady gain is 1/2,
//! the true estimate error variance is `K r / (2 - K) = 10/3`, so
//! `E[d^2] = K^2 (10/3 + r) = 10/3` and `1 + 0.3 * 10/3 = 0.4 * 5`.

use serde::{Deserialize, Serialize};

use super::{kalman_update, validate_common, FilterState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GarchConfig {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub r: f64,
    pub x0_hat: Option<f64>,
    pub p0: Option<f64>,
    /// Variance carried into the first recursion step.
    pub sigma2_0: f64,
}

impl Default for GarchConfig {
    fn default() -> Self {
        GarchConfig {
            a0: 1.0,
            a1: 0.3,
            b1: 0.6,
            r: 10.0,
            x0_hat: None,
            p0: None,
            sigma2_0: 5.0,
        }
    }
}

impl GarchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a0.is_finite() && self.a0 > 0.0) {
            return Err(Error::param(
                "a0",
                format!("must be finite and > 0, got {}", self.a0),
            ));
        }
        if !(self.a1.is_finite() && self.a1 >= 0.0) {
            return Err(Error::param("a1", "must be finite and >= 0"));
        }
        if !(self.b1.is_finite() && self.b1 >= 0.0) {
            return Err(Error::param("b1", "must be finite and >= 0"));
        }
        if self.a1 + self.b1 >= 1.0 {
            return Err(Error::param(
                "a1 + b1",
                format!(
                    "must be < 1 for a finite stationary variance, got {}",
                    self.a1 + self.b1
                ),
            ));
        }
        if !(self.sigma2_0.is_finite() && self.sigma2_0 > 0.0) {
            return Err(Error::param("sigma2_0", "must be finite and > 0"));
        }
        validate_common(self.r, self.p0, self.x0_hat)
    }

    /// Unconditional variance `a0 / (1 - a1 - b1)`.
    pub fn stationary_variance(&self) -> f64 {
        self.a0 / (1.0 - self.a1 - self.b1)
    }
}

/// `a0 + a1 * shock^2 + b1 * prev_sigma2`.
#[inline]
pub fn garch_variance_update(prev_sigma2: f64, shock: f64, cfg: &GarchConfig) -> f64 {
    cfg.a0 + cfg.a1 * shock * shock + cfg.b1 * prev_sigma2
}

pub fn garch_step(state: &FilterState, y: f64, cfg: &GarchConfig) -> FilterState {
    let sigma2 = garch_variance_update(state.sigma2, state.increment, cfg);
    kalman_update(state, y, sigma2, cfg.r)
}
