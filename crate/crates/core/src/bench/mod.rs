//! Monte Carlo comparison of the three trackers.
//!
//! Every trial owns a generator derived from `(master_seed, stream, indices)`, so
//! results do not depend on execution order and serial and parallel runs are
//! bit-identical. Per-trial scores are collected in index order and summed
//! sequentially.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{
    run_filter, FilterConfig, FilterKind, FilterTrace, GarchConfig, KfConfig, NnhConfig,
};
use crate::metrics;
use crate::sim::{
    observe, rng_from_seed, scale_noise_for_input_snr, simulate_jump_process, stream_seed,
    JumpProcessParams, NoiseKind, NoiseSpec, Trajectory,
};

pub mod io;

pub use io::{
    export_trace, read_results, read_trajectory, write_results, write_trajectory, OutputFormat,
    Tabular,
};

const MSE_STREAM: u64 = 0;
const SWEEP_SIGNAL_STREAM: u64 = 1;
const SWEEP_NOISE_STREAM: u64 = 2;

/// The four default comparison scenarios `(lambda, jump mean, jump std)`.
pub const DEFAULT_SCENARIOS: [(f64, f64, f64); 4] = [
    (1.0, 0.0, 10.0),
    (1.0, 3.0, 10.0),
    (2.0, 0.0, 8.0),
    (6.0, 2.0, 20.0),
];

pub fn default_scenarios() -> Vec<JumpProcessParams> {
    DEFAULT_SCENARIOS
        .iter()
        .map(|&(l, m, s)| JumpProcessParams::new(l, m, s).expect("valid defaults"))
        .collect()
}

/// Everything a benchmark run needs. Missing JSON fields take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub trials: usize,
    pub scenarios: Vec<JumpProcessParams>,
    /// Measurement noise for the MSE benchmark.
    pub noise: NoiseSpec,
    pub kf: KfConfig,
    pub garch: GarchConfig,
    pub nnh: NnhConfig,
    /// Input SNR targets in dB.
    pub snr_sweep: Vec<f64>,
    /// Noise family of the SNR sweep.
    pub snr_noise: NoiseKind,
    /// Index into `scenarios` of the signal used by the SNR sweep.
    pub snr_scenario: usize,
    /// Leading samples excluded from every score.
    pub burn_in: usize,
    /// Fan trials out over a thread pool.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            master_seed: 20_180_415,
            trials: 200,
            scenarios: default_scenarios(),
            noise: NoiseSpec::default(),
            kf: KfConfig::default(),
            garch: GarchConfig::default(),
            nnh: NnhConfig::default(),
            snr_sweep: vec![-5.0, 0.0, 5.0, 10.0, 15.0],
            snr_noise: NoiseKind::TwoSidedExponential,
            snr_scenario: 0,
            burn_in: 0,
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Format {
            path: "<config>".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be >= 1"));
        }
        if self.scenarios.is_empty() {
            return Err(Error::param("scenarios", "must not be empty"));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        if self.snr_scenario >= self.scenarios.len() {
            return Err(Error::param("snr_scenario", "index out of range"));
        }
        if self.snr_sweep.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("snr_sweep", "targets must be finite"));
        }
        self.noise.validate()?;
        self.kf.validate()?;
        self.garch.validate()?;
        self.nnh.validate()
    }

    /// The three tracker configs, in [`FilterKind::ALL`] order.
    pub fn filters(&self) -> [FilterConfig; 3] {
        [
            FilterConfig::Kf(self.kf),
            FilterConfig::Garch(self.garch),
            FilterConfig::Nnh(self.nnh),
        ]
    }
}

/// Mean MSE per method for one scenario, with standard errors over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseRow {
    pub scenario: String,
    pub kf_mse: f64,
    pub garch_mse: f64,
    pub nnh_mse: f64,
    pub kf_se: f64,
    pub garch_se: f64,
    pub nnh_se: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MseTable {
    pub rows: Vec<MseRow>,
}

/// Mean SNR improvement per method at one input SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrRow {
    pub input_snr_db: f64,
    pub kf_improvement_db: f64,
    pub garch_improvement_db: f64,
    pub nnh_improvement_db: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SnrCurve {
    pub rows: Vec<SnrRow>,
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn map_trials<T, F>(trials: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..trials).into_par_iter().map(f).collect()
    } else {
        (0..trials).map(f).collect()
    }
}

/// One simulated and observed trial of the MSE benchmark.
pub fn mse_trial_trajectory(
    cfg: &ExperimentConfig,
    scenario: usize,
    trial: usize,
) -> Result<Trajectory> {
    let mut rng = rng_from_seed(stream_seed(
        cfg.master_seed,
        &[MSE_STREAM, scenario as u64, trial as u64],
    ));
    let truth = simulate_jump_process(&cfg.scenarios[scenario], &mut rng)?;
    observe(&truth, &cfg.noise, &mut rng)
}

/// Runs every tracker on an observed trajectory, telling each the noise variance
/// that produced it.
pub fn track_all(cfg: &ExperimentConfig, traj: &Trajectory) -> Result<[FilterTrace; 3]> {
    let ys = traj.measurements()?;
    let r = traj.noise.map(|n| n.variance);
    let run = |f: FilterConfig| run_filter(&r.map_or(f, |r| f.with_r(r)), ys);
    let [kf, garch, nnh] = cfg.filters();
    Ok([run(kf)?, run(garch)?, run(nnh)?])
}

/// Average MSE of each tracker over `cfg.trials` fresh trajectories per scenario.
pub fn run_mse_benchmark(cfg: &ExperimentConfig) -> Result<MseTable> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.scenarios.len());
    for (s, params) in cfg.scenarios.iter().enumerate() {
        let scores = map_trials(cfg.trials, cfg.parallel, |t| {
            let traj = mse_trial_trajectory(cfg, s, t)?;
            let traces = track_all(cfg, &traj)?;
            let mut out = [0.0; 3];
            for (slot, trace) in out.iter_mut().zip(&traces) {
                *slot = metrics::mse_after(&trace.x_hat, &traj.states, cfg.burn_in)?;
            }
            Ok(out)
        })
        .map_err(|e| wrap_trial(e, s))?;
        let column = |i: usize| mean_and_se(&scores.iter().map(|row| row[i]).collect::<Vec<_>>());
        let (kf_mse, kf_se) = column(0);
        let (garch_mse, garch_se) = column(1);
        let (nnh_mse, nnh_se) = column(2);
        rows.push(MseRow {
            scenario: params.label(),
            kf_mse,
            garch_mse,
            nnh_mse,
            kf_se,
            garch_se,
            nnh_se,
        });
    }
    Ok(MseTable { rows })
}

fn wrap_trial(e: Error, scenario: usize) -> Error {
    match e {
        Error::Trial { .. } => e,
        other => Error::Trial {
            scenario,
            trial: usize::MAX,
            source: Box::new(other),
        },
    }
}

/// Produces an estimate from a tracker config and a measurement sequence.
pub trait Estimator: Sync {
    fn estimate(&self, config: &FilterConfig, measurements: &[f64]) -> Result<Vec<f64>>;
}

/// The trackers themselves.
pub struct Trackers;

impl Estimator for Trackers {
    fn estimate(&self, config: &FilterConfig, measurements: &[f64]) -> Result<Vec<f64>> {
        Ok(run_filter(config, measurements)?.x_hat)
    }
}

/// SNR improvement curve with noise scaled to each target input SNR.
pub fn run_snr_sweep(cfg: &ExperimentConfig) -> Result<SnrCurve> {
    run_snr_sweep_with(cfg, &Trackers)
}

/// [`run_snr_sweep`] with the trackers replaced by `estimator`.
///
/// Each trial draws one signal shared by every sweep point; the noise at each
/// point is drawn from its own stream. Trackers are told the applied noise
/// variance.
pub fn run_snr_sweep_with(cfg: &ExperimentConfig, estimator: &dyn Estimator) -> Result<SnrCurve> {
    cfg.validate()?;
    if cfg.snr_sweep.is_empty() {
        return Err(Error::param("snr_sweep", "must not be empty"));
    }
    let params = &cfg.scenarios[cfg.snr_scenario];
    let per_trial = map_trials(cfg.trials, cfg.parallel, |t| {
        let mut rng = rng_from_seed(stream_seed(
            cfg.master_seed,
            &[SWEEP_SIGNAL_STREAM, t as u64],
        ));
        let truth = simulate_jump_process(params, &mut rng)?;
        cfg.snr_sweep
            .iter()
            .enumerate()
            .map(|(i, &target)| {
                let mut rng = rng_from_seed(stream_seed(
                    cfg.master_seed,
                    &[SWEEP_NOISE_STREAM, t as u64, i as u64],
                ));
                let traj = scale_noise_for_input_snr(&truth, target, cfg.snr_noise, &mut rng)?;
                let ys = traj.measurements()?;
                let r = traj.noise.expect("noise recorded").variance;
                let mut out = [0.0; 3];
                for (slot, filter) in out.iter_mut().zip(cfg.filters()) {
                    let est = estimator.estimate(&filter.with_r(r), ys)?;
                    *slot =
                        metrics::score(&truth.states, ys, &est, cfg.burn_in)?.snr_improvement_db;
                }
                Ok(out)
            })
            .collect::<Result<Vec<[f64; 3]>>>()
            .map_err(|e| Error::Trial {
                scenario: cfg.snr_scenario,
                trial: t,
                source: Box::new(e),
            })
    })?;

    let rows = cfg
        .snr_sweep
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let mean =
                |m: usize| mean_and_se(&per_trial.iter().map(|p| p[i][m]).collect::<Vec<_>>()).0;
            SnrRow {
                input_snr_db: target,
                kf_improvement_db: mean(0),
                garch_improvement_db: mean(1),
                nnh_improvement_db: mean(2),
            }
        })
        .collect();
    Ok(SnrCurve { rows })
}

/// Column of a row for `kind`.
impl MseRow {
    pub fn mse(&self, kind: FilterKind) -> f64 {
        match kind {
            FilterKind::Kf => self.kf_mse,
            FilterKind::Garch => self.garch_mse,
            FilterKind::Nnh => self.nnh_mse,
        }
    }
}

impl SnrRow {
    pub fn improvement(&self, kind: FilterKind) -> f64 {
        match kind {
            FilterKind::Kf => self.kf_improvement_db,
            FilterKind::Garch => self.garch_improvement_db,
            FilterKind::Nnh => self.nnh_improvement_db,
        }
    }
}
