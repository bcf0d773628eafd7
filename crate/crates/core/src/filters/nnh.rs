//! Kalman filter with non-linear non-stationary heteroscedastic (NNH) process noise.
//!
//! The process-noise variance is the exponential HGF of an explanatory variable
//! driven by the state increment:
//!
//! ```text
//! h_k       = rho * h_{k-1} + eps_k
//! sigma2_k  = alpha * exp(-beta / h_k^2)
//! ```
//!
//! The true increment `eps_k = x_k - x_{k-1}` is not observable, and its best
//! estimate depends on `sigma2_k` itself: given the innovation `e = y_k - x_hat`,
//! the posterior mean of the increment is `sigma2 / (p + sigma2 + r) * e`. Each
//! step therefore solves
//!
//! ```text
//! sigma2 = alpha * exp(-beta / (rho * h_{k-1} + sigma2 / (p + sigma2 + r) * e)^2)
//! ```
//!
//! and takes the largest solution in `[0, alpha]`, so a jump is never explained
//! away by a smaller variance when a larger self-consistent one exists. The
//! resulting `sigma2` then drives an ordinary predict/update cycle.

use serde::{Deserialize, Serialize};

use super::{kalman_update, validate_common, FilterState};
use crate::error::{Error, Result};
use crate::hgf::{exp_inverse_square, HgfParams};

const MAX_ITER: usize = 500;
const REL_TOL: f64 = 1e-12;
const SCAN_CELLS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NnhConfig {
    pub hgf: HgfParams,
    pub r: f64,
    pub x0_hat: Option<f64>,
    pub p0: Option<f64>,
    /// Initial explanatory variable.
    pub h0: f64,
    /// Process-noise variance of the opening step.
    pub sigma2_1: f64,
}

impl Default for NnhConfig {
    fn default() -> Self {
        NnhConfig {
            hgf: HgfParams::default(),
            r: 10.0,
            x0_hat: None,
            p0: None,
            h0: 0.0,
            sigma2_1: 1e-4,
        }
    }
}

impl NnhConfig {
    pub fn validate(&self) -> Result<()> {
        self.hgf.validate()?;
        if !(self.sigma2_1.is_finite() && self.sigma2_1 > 0.0) {
            return Err(Error::param("sigma2_1", "must be finite and > 0"));
        }
        if !self.h0.is_finite() {
            return Err(Error::param("h0", "must be finite"));
        }
        validate_common(self.r, self.p0, self.x0_hat)
    }

    /// Variance of the first step: `sigma2_1`, or `alpha` when `beta = 0` makes the
    /// HGF constant.
    pub fn opening_volatility(&self) -> f64 {
        if self.hgf.beta == 0.0 {
            self.hgf.alpha
        } else {
            self.sigma2_1
        }
    }
}

#[inline]
fn increment_estimate(sigma2: f64, p: f64, r: f64, innovation: f64) -> f64 {
    sigma2 / (p + sigma2 + r) * innovation
}

/// Largest `s` in `[0, alpha]` with
/// `s = hgf(base + s / (p + s + r) * innovation)`.
///
/// Fixed-point iteration from `alpha` reaches it whenever the map is monotone
/// (`base` and `innovation` share a sign, or `base = 0`); otherwise a scan from
/// `alpha` downward brackets the largest sign change and bisects it.
pub fn solve_volatility(base: f64, innovation: f64, p: f64, r: f64, hgf: &HgfParams) -> f64 {
    let (alpha, beta) = (hgf.alpha, hgf.beta);
    let map =
        |s: f64| exp_inverse_square(base + increment_estimate(s, p, r, innovation), alpha, beta);

    let mut s = alpha;
    for _ in 0..MAX_ITER {
        let next = map(s);
        if (next - s).abs() <= REL_TOL * alpha {
            return next;
        }
        s = next;
    }
    largest_root_by_scan(map, alpha)
}

fn largest_root_by_scan(map: impl Fn(f64) -> f64, alpha: f64) -> f64 {
    let excess = |s: f64| map(s) - s;
    let mut hi = alpha;
    for i in (0..SCAN_CELLS).rev() {
        let lo = alpha * i as f64 / SCAN_CELLS as f64;
        if excess(lo) >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > REL_TOL * alpha {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if excess(mid) >= 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return a;
        }
        hi = lo;
    }
    // excess(0) = map(0) >= 0, so the loop always returns
    0.0
}

/// One NNH step: solve for the volatility, then predict/update with it.
pub fn nnh_step(state: &FilterState, y: f64, cfg: &NnhConfig) -> FilterState {
    let innovation = y - state.x_hat;
    let sigma2 = solve_volatility(cfg.hgf.rho * state.h, innovation, state.p, cfg.r, &cfg.hgf);
    nnh_step_with_volatility(state, y, cfg, sigma2)
}

pub(crate) fn nnh_step_with_volatility(
    state: &FilterState,
    y: f64,
    cfg: &NnhConfig,
    sigma2: f64,
) -> FilterState {
    let innovation = y - state.x_hat;
    let mut next = kalman_update(state, y, sigma2, cfg.r);
    next.h = cfg.hgf.rho * state.h + increment_estimate(sigma2, state.p, cfg.r, innovation);
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{kf_step, KfConfig};
    use crate::hgf::hgf_eval;
    use proptest::prelude::*;

    fn paper() -> NnhConfig {
        NnhConfig::default()
    }

    /// Independent oracle: dense grid for sign changes of `hgf(...) - s`, refined
    /// by bisection, returning the largest root.
    fn brute_force_largest_root(base: f64, e: f64, p: f64, r: f64, hgf: &HgfParams) -> f64 {
        let g = |s: f64| hgf_eval(base + s / (p + s + r) * e, hgf).unwrap() - s;
        let n = 200_000;
        let mut best = 0.0;
        let mut prev_s = 0.0;
        let mut prev_g = g(0.0);
        for i in 1..=n {
            let s = hgf.alpha * i as f64 / n as f64;
            let gs = g(s);
            if prev_g >= 0.0 && gs <= 0.0 {
                let (mut a, mut b) = (prev_s, s);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if g(m) >= 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                best = a;
            }
            prev_s = s;
            prev_g = gs;
        }
        best
    }

    #[test]
    fn beta_zero_matches_constant_q_step() {
        let cfg = NnhConfig {
            hgf: HgfParams::new(12.0, 0.0).unwrap(),
            ..paper()
        };
        let kf = KfConfig {
            q: 12.0,
            ..KfConfig::default()
        };
        let mut a = FilterState::new(0.0, 10.0);
        let mut b = a;
        for y in [0.0, 5.0, -30.0, 2.0, 2.0, 1e3] {
            a = nnh_step(&a, y, &cfg);
            b = kf_step(&b, y, &kf);
            assert_eq!(
                (a.x_hat, a.p, a.sigma2, a.k_gain),
                (b.x_hat, b.p, b.sigma2, b.k_gain)
            );
        }
    }

    #[test]
    fn quiet_step_is_pure_damping() {
        let s = FilterState::new(4.0, 2.0);
        let next = nnh_step(&s, 4.0, &paper());
        assert_eq!(next.sigma2, 0.0);
        assert_eq!(next.k_gain, 2.0 / 12.0);
        assert_eq!(next.x_hat, 4.0);
        assert_eq!(next.h, 0.0);
    }

    #[test]
    fn large_jump_saturates() {
        let s = FilterState::new(0.0, 1.0);
        let next = nnh_step(&s, 100.0, &paper());
        assert!(next.sigma2 > 49.0 && next.sigma2 <= 50.0, "{}", next.sigma2);
        let p_prior = 1.0 + next.sigma2;
        assert!((next.k_gain - p_prior / (p_prior + 10.0)).abs() < 1e-15);
        assert!(next.h > 70.0);
    }

    #[test]
    fn volatility_is_hgf_of_updated_h() {
        let cfg = paper();
        let mut s = FilterState::new(0.0, 10.0);
        for y in [1.0, 9.0, 12.0, 11.0, -20.0, -20.5, -19.0] {
            s = nnh_step(&s, y, &cfg);
            let direct = hgf_eval(s.h, &cfg.hgf).unwrap();
            assert!(
                (s.sigma2 - direct).abs() <= 1e-9 * cfg.hgf.alpha,
                "{} vs {direct}",
                s.sigma2
            );
        }
    }

    #[test]
    fn solver_picks_largest_root() {
        let hgf = HgfParams::new(50.0, 10.0).unwrap();
        let cases = [
            (0.0, 5.0, 0.5),
            (0.0, 4.0, 0.0),
            (0.0, -7.0, 3.0),
            (1.5, 4.0, 1.0),
            (3.0, -6.0, 2.0),
            (-2.0, 9.0, 0.2),
            (0.5, -1.0, 8.0),
        ];
        for (base, e, p) in cases {
            let got = solve_volatility(base, e, p, 10.0, &hgf);
            let want = brute_force_largest_root(base, e, p, 10.0, &hgf);
            assert!(
                (got - want).abs() < 1e-6,
                "base={base} e={e} p={p}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn scan_fallback_agrees_with_iteration() {
        let hgf = HgfParams::new(50.0, 10.0).unwrap();
        for (base, e, p) in [(0.0, 6.0, 1.0), (2.0, 3.0, 0.0), (0.0, 2.0, 0.0)] {
            let map =
                |s: f64| exp_inverse_square(base + increment_estimate(s, p, 10.0, e), 50.0, 10.0);
            let scanned = largest_root_by_scan(map, 50.0);
            let iterated = solve_volatility(base, e, p, 10.0, &hgf);
            assert!((scanned - iterated).abs() < 1e-8, "{scanned} vs {iterated}");
        }
    }

    #[test]
    fn opening_volatility() {
        assert_eq!(paper().opening_volatility(), 1e-4);
        let flat = NnhConfig {
            hgf: HgfParams::new(3.0, 0.0).unwrap(),
            ..paper()
        };
        assert_eq!(flat.opening_volatility(), 3.0);
    }

    #[test]
    fn validation() {
        assert!(NnhConfig {
            sigma2_1: 0.0,
            ..paper()
        }
        .validate()
        .is_err());
        assert!(NnhConfig { r: -1.0, ..paper() }.validate().is_err());
        assert!(paper().validate().is_ok());
    }

    proptest! {
        #[test]
        fn volatility_in_range(base in -50f64..50.0, e in -100f64..100.0, p in 0f64..100.0,
                               beta in 0f64..50.0) {
            let hgf = HgfParams::new(50.0, beta).unwrap();
            let s = solve_volatility(base, e, p, 10.0, &hgf);
            prop_assert!((0.0..=50.0).contains(&s));
            let implied = exp_inverse_square(base + increment_estimate(s, p, 10.0, e), 50.0, beta);
            prop_assert!((implied - s).abs() < 1e-6);
        }
    }
}
