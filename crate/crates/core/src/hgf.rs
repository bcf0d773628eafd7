//! Heterogeneity generating functions: maps from the explanatory variable `h`
//! to a process-noise variance.
//!
//! The workhorse is the exponential inverse-square form `alpha * exp(-beta / h^2)`,
//! which is bounded by `alpha`, even in `h`, and vanishes continuously at `h = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default persistence of the explanatory variable used by the NNH filter.
pub const DEFAULT_RHO: f64 = 0.25;

/// Parameters of the exponential HGF plus the persistence of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HgfParams {
    /// Variance ceiling.
    pub alpha: f64,
    /// Sharpness; 0 turns the HGF into the constant `alpha`.
    pub beta: f64,
    /// Persistence in `h_k = rho * h_{k-1} + increment_k`.
    #[serde(default = "default_rho")]
    pub rho: f64,
}

fn default_rho() -> f64 {
    DEFAULT_RHO
}

impl Default for HgfParams {
    fn default() -> Self {
        HgfParams {
            alpha: 50.0,
            beta: 10.0,
            rho: DEFAULT_RHO,
        }
    }
}

impl HgfParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let params = HgfParams {
            alpha,
            beta,
            rho: DEFAULT_RHO,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        self.rho = rho;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::param(
                "alpha",
                format!("must be finite and > 0, got {}", self.alpha),
            ));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be finite and >= 0, got {}", self.beta),
            ));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::param(
                "rho",
                format!("must lie in [0, 1], got {}", self.rho),
            ));
        }
        Ok(())
    }
}

/// Catalog of heterogeneity generating functions. Every entry is scaled by `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HgfKind {
    /// `exp(-beta / h^2)`
    ExpInverseSquare,
    /// `e^h / (1 + e^h)`
    Logistic,
    /// `1 + e^(-h^2)`
    OnePlusGauss,
    /// `e^(-h^2)`
    Gauss,
    /// `|h|`
    Abs,
}

impl HgfKind {
    pub const ALL: [HgfKind; 5] = [
        HgfKind::ExpInverseSquare,
        HgfKind::Logistic,
        HgfKind::OnePlusGauss,
        HgfKind::Gauss,
        HgfKind::Abs,
    ];

    pub fn eval(self, h: f64, params: &HgfParams) -> Result<f64> {
        hgf_catalog_eval(h, self, params)
    }
}

fn check_finite(h: f64) -> Result<()> {
    if h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "HGF argument must be finite, got {h}"
        )))
    }
}

/// `alpha * exp(-beta / h^2)`, with the `h -> 0` limit (0 for `beta > 0`, `alpha`
/// for `beta = 0`). Exponents below `ln(f64::MIN_POSITIVE)` return exactly 0.
pub fn hgf_eval(h: f64, params: &HgfParams) -> Result<f64> {
    check_finite(h)?;
    Ok(exp_inverse_square(h, params.alpha, params.beta))
}

/// Unchecked kernel behind [`hgf_eval`].
#[inline]
pub(crate) fn exp_inverse_square(h: f64, alpha: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        return alpha;
    }
    let h2 = h * h;
    if h2 == 0.0 {
        return 0.0;
    }
    let exponent = -beta / h2;
    if exponent < f64::MIN_POSITIVE.ln() {
        return 0.0;
    }
    alpha * exponent.exp()
}

/// Evaluates any catalog entry, scaled by `alpha`.
pub fn hgf_catalog_eval(h: f64, kind: HgfKind, params: &HgfParams) -> Result<f64> {
    check_finite(h)?;
    let unscaled = match kind {
        HgfKind::ExpInverseSquare => return hgf_eval(h, params),
        HgfKind::Logistic => {
            if h >= 0.0 {
                1.0 / (1.0 + (-h).exp())
            } else {
                let e = h.exp();
                e / (1.0 + e)
            }
        }
        HgfKind::OnePlusGauss => 1.0 + (-h * h).exp(),
        HgfKind::Gauss => (-h * h).exp(),
        HgfKind::Abs => h.abs(),
    };
    Ok((params.alpha * unscaled).min(f64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn paper() -> HgfParams {
        HgfParams::new(50.0, 10.0).unwrap()
    }

    #[test]
    fn exponent_minus_one() {
        let v = hgf_eval(10f64.sqrt(), &paper()).unwrap();
        assert!((v - 50.0 * (-1f64).exp()).abs() < 1e-12);
        assert!((v - 18.393_972_058_572_12).abs() < 1e-9);
    }

    #[test]
    fn zero_and_infinity_limits() {
        assert_eq!(hgf_eval(0.0, &paper()).unwrap(), 0.0);
        assert_eq!(hgf_eval(-0.0, &paper()).unwrap(), 0.0);
        assert!((hgf_eval(1e9, &paper()).unwrap() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn beta_zero_is_constant() {
        let p = HgfParams::new(7.0, 0.0).unwrap();
        for h in [0.0, 1e-300, 1.0, -3.0, 1e300] {
            assert_eq!(hgf_eval(h, &p).unwrap(), 7.0);
        }
    }

    #[test]
    fn subnormal_and_underflow() {
        let p = paper();
        assert_eq!(hgf_eval(5e-324, &p).unwrap(), 0.0);
        assert_eq!(hgf_eval(1e-160, &p).unwrap(), 0.0);
        // exponent just below ln(MIN_POSITIVE) ~ -708.4
        assert_eq!(hgf_eval((10.0f64 / 709.0).sqrt(), &p).unwrap(), 0.0);
        assert!(hgf_eval((10.0f64 / 700.0).sqrt(), &p).unwrap() > 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(hgf_eval(f64::NAN, &paper()).is_err());
        assert!(hgf_eval(f64::INFINITY, &paper()).is_err());
        assert!(hgf_catalog_eval(f64::NEG_INFINITY, HgfKind::Abs, &paper()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(HgfParams::new(0.0, 1.0).is_err());
        assert!(HgfParams::new(1.0, -1.0).is_err());
        assert!(HgfParams::new(1.0, f64::NAN).is_err());
        assert!(paper().with_rho(1.5).is_err());
        assert!(paper().with_rho(1.0).is_ok());
    }

    #[test]
    fn catalog_values() {
        let unit = HgfParams::new(1.0, 10.0).unwrap();
        assert_eq!(
            hgf_catalog_eval(0.0, HgfKind::Logistic, &unit).unwrap(),
            0.5
        );
        assert_eq!(hgf_catalog_eval(0.0, HgfKind::Gauss, &unit).unwrap(), 1.0);
        assert_eq!(
            hgf_catalog_eval(0.0, HgfKind::OnePlusGauss, &unit).unwrap(),
            2.0
        );
        let two = HgfParams::new(2.0, 10.0).unwrap();
        assert_eq!(hgf_catalog_eval(-3.0, HgfKind::Abs, &two).unwrap(), 6.0);
        assert_eq!(
            hgf_catalog_eval(3.0, HgfKind::ExpInverseSquare, &paper()).unwrap(),
            hgf_eval(3.0, &paper()).unwrap()
        );
        assert!(hgf_catalog_eval(-800.0, HgfKind::Logistic, &unit).unwrap() >= 0.0);
        assert!(hgf_catalog_eval(800.0, HgfKind::Logistic, &unit).unwrap() <= 1.0);
    }

    proptest! {
        #[test]
        fn bounded_even_and_finite(h in -1e6f64..1e6, alpha in 1e-3f64..1e3, beta in 0f64..1e3) {
            let p = HgfParams::new(alpha, beta).unwrap();
            let v = hgf_eval(h, &p).unwrap();
            prop_assert!(v.is_finite());
            prop_assert!((0.0..=alpha).contains(&v));
            prop_assert_eq!(v, hgf_eval(-h, &p).unwrap());
        }

        #[test]
        fn monotone_in_abs_h(a in 0f64..100.0, b in 0f64..100.0, beta in 1e-3f64..100.0) {
            let p = HgfParams::new(50.0, beta).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(hgf_eval(lo, &p).unwrap() <= hgf_eval(-hi, &p).unwrap());
        }

        #[test]
        fn catalog_is_finite_and_nonnegative(h in proptest::num::f64::NORMAL, idx in 0usize..5) {
            let v = hgf_catalog_eval(h, HgfKind::ALL[idx], &paper()).unwrap();
            prop_assert!(v.is_finite() && v >= 0.0);
        }
    }
}
