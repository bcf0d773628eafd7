//! Ground-truth compound-Poisson jump trajectories and their noisy observations.
//!
//! A trajectory is sampled on a uniform grid `t_k = k * dt`. Between grid points
//! the number of jumps is an exact Poisson(`lambda * dt`) draw, each jump is
//! Gaussian, and an optional Gaussian modeling noise `w_k` is added:
//!
//! ```text
//! x_k = x_{k-1} + sum_{j=1..N_k} z_j + w_k
//! ```
//!
//! Every function takes its generator explicitly; identical seeds give
//! bit-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator used for every simulation stream.
pub type SimRng = ChaCha8Rng;

/// Creates a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a path of indices
/// (scenario, trial, ...). Stable across platforms and releases.
pub fn stream_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &i| {
        splitmix64(acc ^ splitmix64(i.wrapping_add(1)))
    })
}

/// Generative parameters of a compound-Poisson jump trajectory.
///
/// `jump_std` is the standard deviation of a single jump, not its variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpProcessParams {
    /// Jump density in jumps per second.
    pub lambda: f64,
    /// Sampling interval in seconds.
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub jump_mean: f64,
    pub jump_std: f64,
    /// Total duration in seconds.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub x0: f64,
    /// Standard deviation of the per-step modeling noise; 0 gives a pure-jump path.
    #[serde(default)]
    pub process_noise_std: f64,
}

fn default_dt() -> f64 {
    0.1
}

fn default_horizon() -> f64 {
    100.0
}

impl JumpProcessParams {
    /// Pure-jump parameters with `dt = 0.1`, `horizon = 100`, `x0 = 0`.
    pub fn new(lambda: f64, jump_mean: f64, jump_std: f64) -> Result<Self> {
        let params = JumpProcessParams {
            lambda,
            dt: default_dt(),
            jump_mean,
            jump_std,
            horizon: default_horizon(),
            x0: 0.0,
            process_noise_std: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_timing(mut self, dt: f64, horizon: f64) -> Result<Self> {
        self.dt = dt;
        self.horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_process_noise_std(mut self, std: f64) -> Result<Self> {
        self.process_noise_std = std;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("lambda", self.lambda),
            ("dt", self.dt),
            ("jump_mean", self.jump_mean),
            ("jump_std", self.jump_std),
            ("horizon", self.horizon),
            ("x0", self.x0),
            ("process_noise_std", self.process_noise_std),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::param(name, "must be finite"));
        }
        if self.dt <= 0.0 {
            return Err(Error::param("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.horizon < self.dt {
            return Err(Error::param(
                "horizon",
                format!("must be >= dt ({}), got {}", self.dt, self.horizon),
            ));
        }
        if self.lambda < 0.0 {
            return Err(Error::param(
                "lambda",
                format!("must be >= 0, got {}", self.lambda),
            ));
        }
        if self.jump_std < 0.0 {
            return Err(Error::param("jump_std", "must be >= 0"));
        }
        if self.process_noise_std < 0.0 {
            return Err(Error::param("process_noise_std", "must be >= 0"));
        }
        Ok(())
    }

    /// `floor(horizon / dt) + 1`.
    pub fn n_samples(&self) -> usize {
        // the tolerance absorbs representation error such as 100.0 / 0.1
        ((self.horizon / self.dt) * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn lambda_dt(&self) -> f64 {
        self.lambda * self.dt
    }

    /// Label in the `lambda=.., mu=.., sigma=..` style of the benchmark tables.
    pub fn label(&self) -> String {
        format!(
            "lambda={}, mu={}, sigma={}",
            self.lambda, self.jump_mean, self.jump_std
        )
    }
}

/// Measurement-noise family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    Gaussian,
    /// `kappa * eta` with `kappa` uniform on {-1, +1} and `eta` exponential.
    TwoSidedExponential,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::TwoSidedExponential => "two-sided-exponential",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(NoiseKind::Gaussian),
            "two-sided-exponential" => Ok(NoiseKind::TwoSidedExponential),
            other => Err(Error::param(
                "noise kind",
                format!("unknown kind `{other}`"),
            )),
        }
    }
}

/// Measurement noise: family plus variance `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub variance: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            kind: NoiseKind::Gaussian,
            variance: 10.0,
        }
    }
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, variance: f64) -> Result<Self> {
        let spec = NoiseSpec { kind, variance };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return Err(Error::param(
                "variance",
                format!("must be finite and > 0, got {}", self.variance),
            ));
        }
        Ok(())
    }

    /// Mean `m` of the exponential magnitude, chosen so that `2 m^2 = variance`.
    pub fn exponential_mean(&self) -> f64 {
        (self.variance / 2.0).sqrt()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            NoiseKind::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                self.variance.sqrt() * z
            }
            NoiseKind::TwoSidedExponential => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let eta: f64 = Exp::new(1.0).expect("unit rate").sample(rng);
                sign * self.exponential_mean() * eta
            }
        }
    }
}

/// Time-indexed true states and (optionally) their measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<f64>,
    pub measurements: Option<Vec<f64>>,
    /// Realized jump count per step; entry 0 is always 0.
    pub jump_counts: Vec<u32>,
    /// Noise that produced `measurements`, when known.
    pub noise: Option<NoiseSpec>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn measurements(&self) -> Result<&[f64]> {
        self.measurements
            .as_deref()
            .ok_or_else(|| Error::Precondition("trajectory has no measurements".into()))
    }

    /// Step indices where at least one jump occurred.
    pub fn jump_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.jump_counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(k, _)| k)
    }

    pub fn total_jumps(&self) -> u64 {
        self.jump_counts.iter().map(|&n| u64::from(n)).sum()
    }
}

/// Draws the number of Poisson points in one sampling interval.
pub fn sample_jump_count<R: Rng + ?Sized>(lambda_dt: f64, rng: &mut R) -> Result<u32> {
    if !(lambda_dt.is_finite() && lambda_dt >= 0.0) {
        return Err(Error::param(
            "lambda_dt",
            format!("must be finite and >= 0, got {lambda_dt}"),
        ));
    }
    if lambda_dt == 0.0 {
        return Ok(0);
    }
    let poisson = Poisson::new(lambda_dt).map_err(|e| Error::param("lambda_dt", e.to_string()))?;
    let n: f64 = poisson.sample(rng);
    Ok(n as u32)
}

/// Samples a ground-truth trajectory. Measurements are left unset.
pub fn simulate_jump_process<R: Rng + ?Sized>(
    params: &JumpProcessParams,
    rng: &mut R,
) -> Result<Trajectory> {
    params.validate()?;
    let n = params.n_samples();
    let jump = Normal::new(params.jump_mean, params.jump_std)
        .map_err(|e| Error::param("jump_std", e.to_string()))?;
    let modeling = Normal::new(0.0, params.process_noise_std)
        .map_err(|e| Error::param("process_noise_std", e.to_string()))?;
    let lambda_dt = params.lambda_dt();

    let mut states = Vec::with_capacity(n);
    let mut jump_counts = Vec::with_capacity(n);
    states.push(params.x0);
    jump_counts.push(0);
    let mut x = params.x0;
    for _ in 1..n {
        let count = sample_jump_count(lambda_dt, rng)?;
        for _ in 0..count {
            x += jump.sample(rng);
        }
        if params.process_noise_std > 0.0 {
            x += modeling.sample(rng);
        }
        states.push(x);
        jump_counts.push(count);
    }

    Ok(Trajectory {
        times: (0..n).map(|k| k as f64 * params.dt).collect(),
        states,
        measurements: None,
        jump_counts,
        noise: None,
    })
}

fn require_states(traj: &Trajectory) -> Result<()> {
    if traj.states.is_empty() {
        return Err(Error::Precondition("trajectory has no states".into()));
    }
    Ok(())
}

/// Returns a copy of `traj` with `measurements[k] = states[k] + nu_k`.
pub fn observe<R: Rng + ?Sized>(
    traj: &Trajectory,
    spec: &NoiseSpec,
    rng: &mut R,
) -> Result<Trajectory> {
    require_states(traj)?;
    spec.validate()?;
    let measurements = traj.states.iter().map(|&x| x + spec.sample(rng)).collect();
    Ok(Trajectory {
        measurements: Some(measurements),
        noise: Some(*spec),
        ..traj.clone()
    })
}

/// Contaminates `traj` with noise of `kind` whose realized power puts the input
/// SNR, `10 log10(sum x^2 / sum nu^2)`, exactly at `target_snr_db`.
///
/// The recorded noise variance is the realized mean square of the noise.
pub fn scale_noise_for_input_snr<R: Rng + ?Sized>(
    traj: &Trajectory,
    target_snr_db: f64,
    kind: NoiseKind,
    rng: &mut R,
) -> Result<Trajectory> {
    require_states(traj)?;
    if !target_snr_db.is_finite() {
        return Err(Error::param("target_snr_db", "must be finite"));
    }
    let signal_power: f64 = traj.states.iter().map(|x| x * x).sum();
    if signal_power == 0.0 {
        return Err(Error::ZeroPower("signal"));
    }
    let unit = NoiseSpec {
        kind,
        variance: 1.0,
    };
    let raw: Vec<f64> = (0..traj.len()).map(|_| unit.sample(rng)).collect();
    let raw_power: f64 = raw.iter().map(|v| v * v).sum();
    if raw_power == 0.0 {
        return Err(Error::ZeroPower("noise draw"));
    }
    let target_noise_power = signal_power / 10f64.powf(target_snr_db / 10.0);
    let scale = (target_noise_power / raw_power).sqrt();
    let measurements = traj
        .states
        .iter()
        .zip(&raw)
        .map(|(x, v)| x + scale * v)
        .collect();
    let variance = target_noise_power / traj.len() as f64;
    Ok(Trajectory {
        measurements: Some(measurements),
        noise: Some(NoiseSpec::new(kind, variance)?),
        ..traj.clone()
    })
}
