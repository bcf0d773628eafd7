//! Scores for estimated trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reported SNR when the error power is exactly zero.
pub const SNR_CAP_DB: f64 = 300.0;

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    Ok(())
}

fn skip(xs: &[f64], burn_in: usize) -> Result<&[f64]> {
    xs.get(burn_in..)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::InvalidInput(format!("burn-in {burn_in} leaves no samples")))
}

/// Mean of squared differences.
pub fn mse(estimates: &[f64], truth: &[f64]) -> Result<f64> {
    check_pair(estimates, truth)?;
    let sum: f64 = estimates
        .iter()
        .zip(truth)
        .map(|(e, t)| (e - t).powi(2))
        .sum();
    Ok(sum / estimates.len() as f64)
}

/// [`mse`] over samples `burn_in..`.
pub fn mse_after(estimates: &[f64], truth: &[f64], burn_in: usize) -> Result<f64> {
    check_pair(estimates, truth)?;
    mse(skip(estimates, burn_in)?, skip(truth, burn_in)?)
}

/// `10 log10(sum signal^2 / sum error^2)`.
pub fn snr_db(signal: &[f64], error: &[f64]) -> Result<f64> {
    check_pair(signal, error)?;
    let ps: f64 = signal.iter().map(|v| v * v).sum();
    let pe: f64 = error.iter().map(|v| v * v).sum();
    if ps == 0.0 {
        return Err(Error::ZeroPower("signal"));
    }
    if pe == 0.0 {
        return Err(Error::ZeroPower("error"));
    }
    Ok(10.0 * (ps / pe).log10())
}

/// Input/output SNR of one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub mse: f64,
    pub input_snr_db: f64,
    pub output_snr_db: f64,
    pub snr_improvement_db: f64,
    /// Output error was exactly zero and `output_snr_db` holds [`SNR_CAP_DB`].
    pub capped: bool,
}

/// Scores `estimates` against `truth`, with `measurements` as the input.
pub fn score(
    truth: &[f64],
    measurements: &[f64],
    estimates: &[f64],
    burn_in: usize,
) -> Result<ScoreReport> {
    check_pair(truth, measurements)?;
    check_pair(truth, estimates)?;
    let truth = skip(truth, burn_in)?;
    let measurements = skip(measurements, burn_in)?;
    let estimates = skip(estimates, burn_in)?;

    let diff = |xs: &[f64]| -> Vec<f64> { xs.iter().zip(truth).map(|(x, t)| x - t).collect() };
    let input_snr_db = snr_db(truth, &diff(measurements))?;
    let (output_snr_db, capped) = match snr_db(truth, &diff(estimates)) {
        Ok(v) => (v, false),
        Err(Error::ZeroPower("error")) => (SNR_CAP_DB, true),
        Err(e) => return Err(e),
    };
    Ok(ScoreReport {
        mse: mse(estimates, truth)?,
        input_snr_db,
        output_snr_db,
        snr_improvement_db: output_snr_db - input_snr_db,
        capped,
    })
}

/// Output SNR minus input SNR, in dB.
pub fn snr_improvement_db(truth: &[f64], measurements: &[f64], estimates: &[f64]) -> Result<f64> {
    Ok(score(truth, measurements, estimates, 0)?.snr_improvement_db)
}
