//! Scalar recursive trackers for a random-walk state observed in additive noise
//! (`A = H = 1`).
//!
//! All three filters share the same measurement update and differ only in the
//! process-noise variance fed to the prediction:
//!
//! * [`kf`]: a constant `q`.
//! * [`garch`]: a GARCH(1,1) recursion on the estimated state increment.
//! * [`nnh`]: the exponential HGF of an integrated explanatory variable, solved
//!   jointly with the step's own increment estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod garch;
pub mod kf;
pub mod nnh;

pub use garch::{garch_step, garch_variance_update, GarchConfig};
pub use kf::{kf_step, KfConfig};
pub use nnh::{nnh_step, solve_volatility, NnhConfig};

/// Filter internals after a step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    pub x_hat: f64,
    /// Posterior estimate variance.
    pub p: f64,
    /// Explanatory variable (NNH only; 0 elsewhere).
    pub h: f64,
    /// Process-noise variance used by the last prediction.
    pub sigma2: f64,
    /// Last Kalman gain.
    pub k_gain: f64,
    /// Last filtered increment `x_hat_k - x_hat_{k-1}`.
    pub increment: f64,
}

impl FilterState {
    pub fn new(x_hat: f64, p: f64) -> Self {
        FilterState {
            x_hat,
            p,
            h: 0.0,
            sigma2: 0.0,
            k_gain: 0.0,
            increment: 0.0,
        }
    }
}

/// Predict with process variance `q`, then update with measurement `y`.
#[inline]
pub(crate) fn kalman_update(state: &FilterState, y: f64, q: f64, r: f64) -> FilterState {
    let p_prior = state.p + q;
    let gain = p_prior / (p_prior + r);
    let x_hat = state.x_hat + gain * (y - state.x_hat);
    FilterState {
        x_hat,
        p: (1.0 - gain) * p_prior,
        h: state.h,
        sigma2: q,
        k_gain: gain,
        increment: x_hat - state.x_hat,
    }
}

/// Shared checks for the `r`, `p0` and `x0_hat` fields every config carries.
pub(crate) fn validate_common(r: f64, p0: Option<f64>, x0_hat: Option<f64>) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::param(
            "r",
            format!("must be finite and > 0, got {r}"),
        ));
    }
    if let Some(p0) = p0 {
        if !(p0.is_finite() && p0 >= 0.0) {
            return Err(Error::param(
                "p0",
                format!("must be finite and >= 0, got {p0}"),
            ));
        }
    }
    if let Some(x0) = x0_hat {
        if !x0.is_finite() {
            return Err(Error::param("x0_hat", "must be finite"));
        }
    }
    Ok(())
}

/// Which tracker to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Kf,
    Garch,
    Nnh,
}

impl FilterKind {
    pub const ALL: [FilterKind; 3] = [FilterKind::Kf, FilterKind::Garch, FilterKind::Nnh];

    pub fn as_str(&self) -> &'static str {
        match self {
            FilterKind::Kf => "kf",
            FilterKind::Garch => "garch",
            FilterKind::Nnh => "nnh",
        }
    }
}

/// A configured tracker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterConfig {
    Kf(KfConfig),
    Garch(GarchConfig),
    Nnh(NnhConfig),
}

impl FilterConfig {
    pub fn kind(&self) -> FilterKind {
        match self {
            FilterConfig::Kf(_) => FilterKind::Kf,
            FilterConfig::Garch(_) => FilterKind::Garch,
            FilterConfig::Nnh(_) => FilterKind::Nnh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FilterConfig::Kf(c) => c.validate(),
            FilterConfig::Garch(c) => c.validate(),
            FilterConfig::Nnh(c) => c.validate(),
        }
    }

    /// Replaces the measurement-noise variance.
    pub fn with_r(self, r: f64) -> Self {
        match self {
            FilterConfig::Kf(c) => FilterConfig::Kf(KfConfig { r, ..c }),
            FilterConfig::Garch(c) => FilterConfig::Garch(GarchConfig { r, ..c }),
            FilterConfig::Nnh(c) => FilterConfig::Nnh(NnhConfig { r, ..c }),
        }
    }

    /// State before the first measurement; `x0_hat = None` falls back to `first_y`.
    pub fn initial_state(&self, first_y: f64) -> FilterState {
        let (x0_hat, p0, r) = match self {
            FilterConfig::Kf(c) => (c.x0_hat, c.p0, c.r),
            FilterConfig::Garch(c) => (c.x0_hat, c.p0, c.r),
            FilterConfig::Nnh(c) => (c.x0_hat, c.p0, c.r),
        };
        let mut state = FilterState::new(x0_hat.unwrap_or(first_y), p0.unwrap_or(r));
        match self {
            FilterConfig::Kf(c) => state.sigma2 = c.q,
            FilterConfig::Garch(c) => state.sigma2 = c.sigma2_0,
            FilterConfig::Nnh(c) => {
                state.h = c.h0;
                state.sigma2 = c.opening_volatility();
            }
        }
        state
    }

    /// Advances `state` by one measurement; `first` marks the opening step.
    pub fn step(&self, state: &FilterState, y: f64, first: bool) -> FilterState {
        match self {
            FilterConfig::Kf(c) => kf_step(state, y, c),
            FilterConfig::Garch(c) => garch_step(state, y, c),
            FilterConfig::Nnh(c) if first => {
                nnh::nnh_step_with_volatility(state, y, c, c.opening_volatility())
            }
            FilterConfig::Nnh(c) => nnh_step(state, y, c),
        }
    }
}

/// Per-step filter internals over a whole measurement sequence.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FilterTrace {
    pub x_hat: Vec<f64>,
    pub p: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub k_gain: Vec<f64>,
    /// Explanatory variable, recorded by the NNH filter only.
    pub h: Option<Vec<f64>>,
}

impl FilterTrace {
    fn with_capacity(n: usize, track_h: bool) -> Self {
        FilterTrace {
            x_hat: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            sigma2: Vec::with_capacity(n),
            k_gain: Vec::with_capacity(n),
            h: track_h.then(|| Vec::with_capacity(n)),
        }
    }

    fn push(&mut self, s: &FilterState) {
        self.x_hat.push(s.x_hat);
        self.p.push(s.p);
        self.sigma2.push(s.sigma2);
        self.k_gain.push(s.k_gain);
        if let Some(h) = self.h.as_mut() {
            h.push(s.h);
        }
    }

    pub fn len(&self) -> usize {
        self.x_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_hat.is_empty()
    }
}

/// Checks that `measurements` is nonempty and finite.
pub fn validate_measurements(measurements: &[f64]) -> Result<()> {
    if measurements.is_empty() {
        return Err(Error::InvalidInput("measurement sequence is empty".into()));
    }
    if let Some((index, &value)) = measurements
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite())
    {
        return Err(Error::NonFiniteMeasurement { index, value });
    }
    Ok(())
}

/// Runs a tracker over `measurements` from its configured initial state.
pub fn run_filter(config: &FilterConfig, measurements: &[f64]) -> Result<FilterTrace> {
    config.validate()?;
    validate_measurements(measurements)?;
    let mut trace =
        FilterTrace::with_capacity(measurements.len(), config.kind() == FilterKind::Nnh);
    let mut state = config.initial_state(measurements[0]);
    for (k, &y) in measurements.iter().enumerate() {
        state = config.step(&state, y, k == 0);
        trace.push(&state);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgf::HgfParams;
    use crate::sim::{rng_from_seed, SimRng};
    use proptest::prelude::*;
    use rand::Rng;

    fn configs() -> [FilterConfig; 3] {
        [
            FilterConfig::Kf(KfConfig::default()),
            FilterConfig::Garch(GarchConfig::default()),
            FilterConfig::Nnh(NnhConfig::default()),
        ]
    }

    fn random_walk(rng: &mut SimRng, n: usize) -> Vec<f64> {
        let mut x = 0.0;
        (0..n)
            .map(|_| {
                if rng.random::<f64>() < 0.1 {
                    x += 20.0 * (rng.random::<f64>() - 0.5);
                }
                x + 6.0 * (rng.random::<f64>() - 0.5)
            })
            .collect()
    }

    #[test]
    fn rejects_bad_measurements() {
        let cfg = FilterConfig::Kf(KfConfig::default());
        assert!(matches!(run_filter(&cfg, &[]), Err(Error::InvalidInput(_))));
        match run_filter(&cfg, &[1.0, 2.0, f64::NAN, 3.0]) {
            Err(Error::NonFiniteMeasurement { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_measurement_is_convex_combination() {
        for cfg in configs() {
            let cfg = match cfg {
                FilterConfig::Kf(c) => FilterConfig::Kf(KfConfig {
                    x0_hat: Some(-4.0),
                    ..c
                }),
                FilterConfig::Garch(c) => FilterConfig::Garch(GarchConfig {
                    x0_hat: Some(-4.0),
                    ..c
                }),
                FilterConfig::Nnh(c) => FilterConfig::Nnh(NnhConfig {
                    x0_hat: Some(-4.0),
                    ..c
                }),
            };
            let trace = run_filter(&cfg, &[6.0]).unwrap();
            assert_eq!(trace.len(), 1);
            assert!(
                trace.x_hat[0] > -4.0 && trace.x_hat[0] < 6.0,
                "{:?}",
                cfg.kind()
            );
        }
    }

    #[test]
    fn nnh_trace_carries_h_only() {
        let ys = [1.0, 2.0, 3.0];
        for cfg in configs() {
            let trace = run_filter(&cfg, &ys).unwrap();
            assert_eq!(trace.h.is_some(), cfg.kind() == FilterKind::Nnh);
            assert_eq!(trace.sigma2.len(), 3);
        }
    }

    #[test]
    fn first_nnh_step_uses_initial_volatility() {
        let cfg = NnhConfig::default();
        let trace = run_filter(&FilterConfig::Nnh(cfg), &[3.0, 3.0]).unwrap();
        assert_eq!(trace.sigma2[0], cfg.sigma2_1);
    }

    #[test]
    fn constant_measurements_converge() {
        let ys = vec![4.0; 400];
        let trace = run_filter(
            &FilterConfig::Nnh(NnhConfig {
                x0_hat: Some(0.0),
                ..NnhConfig::default()
            }),
            &ys,
        )
        .unwrap();
        // quiet state: the gain decays like a running mean, so the error shrinks like 1/k
        let err: Vec<f64> = trace.x_hat.iter().map(|x| (x - 4.0).abs()).collect();
        assert!(err[399] < 0.011, "{}", err[399]);
        assert!(err[399] < err[199] && err[199] < err[99]);
        let g = &trace.k_gain;
        assert!(g[300..].windows(2).all(|w| w[1] <= w[0]));
        assert!(g[399] > 0.0 && g[399] < 0.01);
    }

    #[test]
    fn runs_are_deterministic() {
        let ys = random_walk(&mut rng_from_seed(3), 500);
        for cfg in configs() {
            assert_eq!(
                run_filter(&cfg, &ys).unwrap(),
                run_filter(&cfg, &ys).unwrap()
            );
        }
    }

    #[test]
    fn degenerate_configs_match_constant_q() {
        let ys = random_walk(&mut rng_from_seed(4), 1000);
        let q = 7.5;
        let kf = run_filter(
            &FilterConfig::Kf(KfConfig {
                q,
                ..KfConfig::default()
            }),
            &ys,
        )
        .unwrap();
        let nnh = NnhConfig {
            hgf: HgfParams::new(q, 0.0).unwrap(),
            ..NnhConfig::default()
        };
        let garch = GarchConfig {
            a0: q,
            a1: 0.0,
            b1: 0.0,
            ..GarchConfig::default()
        };
        let nnh_trace = run_filter(&FilterConfig::Nnh(nnh), &ys).unwrap();
        let garch_trace = run_filter(&FilterConfig::Garch(garch), &ys).unwrap();
        for trace in [&nnh_trace, &garch_trace] {
            assert_eq!(trace.x_hat, kf.x_hat);
            assert_eq!(trace.p, kf.p);
            assert_eq!(trace.k_gain, kf.k_gain);
            assert_eq!(trace.sigma2, kf.sigma2);
        }
    }

    proptest! {
        #[test]
        fn gains_and_covariances_stay_in_range(seed in 0u64..1000, kind in 0usize..3) {
            let ys = random_walk(&mut rng_from_seed(seed), 200);
            let cfg = configs()[kind];
            let trace = run_filter(&cfg, &ys).unwrap();
            for k in 0..trace.len() {
                prop_assert!(trace.p[k] >= 0.0);
                prop_assert!(trace.sigma2[k] >= 0.0);
                prop_assert!((0.0..=1.0).contains(&trace.k_gain[k]));
            }
            if let FilterConfig::Nnh(c) = cfg {
                prop_assert!(trace.sigma2.iter().all(|&s| s <= c.hgf.alpha));
            }
        }
    }
}
