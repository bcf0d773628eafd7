use serde::{Deserialize, Serialize};

use super::{kalman_update, validate_common, FilterState};
use crate::error::{Error, Result};

/// Constant process-noise Kalman filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KfConfig {
    pub q: f64,
    pub r: f64,
    /// `None` starts from the first measurement.
    pub x0_hat: Option<f64>,
    /// `None` starts from `r`.
    pub p0: Option<f64>,
}

impl Default for KfConfig {
    fn default() -> Self {
        KfConfig {
            q: 5.0,
            r: 10.0,
            x0_hat: None,
            p0: None,
        }
    }
}

impl KfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.q >= 0.0) {
            return Err(Error::param(
                "q",
                format!("must be finite and >= 0, got {}", self.q),
            ));
        }
        validate_common(self.r, self.p0, self.x0_hat)
    }
}

/// One predict/update cycle with `q` from the config.
pub fn kf_step(state: &FilterState, y: f64, cfg: &KfConfig) -> FilterState {
    kalman_update(state, y, cfg.q, cfg.r)
}
