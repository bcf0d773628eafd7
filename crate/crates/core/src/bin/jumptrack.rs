use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use jumptrack::bench::{self, ExperimentConfig, OutputFormat};
use jumptrack::filters::FilterTrace;
use jumptrack::sim::Trajectory;
use jumptrack::{Error, Result};

#[derive(Parser)]
#[command(
    name = "jumptrack",
    version,
    about = "Track jump processes with adaptive Kalman filters"
)]
struct Cli {
    /// Experiment config (JSON). Missing fields take defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Monte Carlo trials per scenario, overriding the config.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one observed trajectory.
    Simulate {
        /// Scenario index in the config.
        #[arg(long, default_value_t = 0)]
        scenario: usize,
    },
    /// Run all three trackers on one trajectory and export the per-step trace.
    Track {
        /// Trajectory CSV from `simulate`; a fresh one is simulated when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        scenario: usize,
    },
    /// Monte Carlo MSE comparison over all scenarios.
    BenchMse {
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// SNR improvement versus input SNR.
    BenchSnr {
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Serialize)]
struct TrackOutput<'a> {
    trajectory: &'a Trajectory,
    kf: &'a FilterTrace,
    garch: &'a FilterTrace,
    nnh: &'a FilterTrace,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Format {
                path: path.clone(),
                message: e.to_string(),
            })?;
            ExperimentConfig::from_json(&text).map_err(|e| match e {
                Error::Format { message, .. } => Error::Format {
                    path: path.clone(),
                    message,
                },
                other => other,
            })?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn scenario_index(cfg: &ExperimentConfig, i: usize) -> Result<usize> {
    if i < cfg.scenarios.len() {
        Ok(i)
    } else {
        Err(Error::InvalidParameter {
            name: "scenario",
            reason: format!("index {i} out of range ({} scenarios)", cfg.scenarios.len()),
        })
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn with_output(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(io(path))?);
            f(&mut w)?;
            w.flush().map_err(io(path))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush().map_err(io(Path::new("<stdout>")))
        }
    }
}

fn json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    w.write_all(b"\n").map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    let format: OutputFormat = cli.format.parse()?;
    let mut cfg = load_config(&cli)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Simulate { scenario } => {
            let s = scenario_index(&cfg, scenario)?;
            let traj = bench::mse_trial_trajectory(&cfg, s, 0)?;
            with_output(out, |w| match format {
                OutputFormat::Csv => bench::write_trajectory(&traj, w),
                OutputFormat::Json => json(&traj, w),
            })
        }
        Command::Track { input, scenario } => {
            let traj = match input {
                Some(path) => {
                    let file = File::open(&path).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    let mut traj = bench::read_trajectory(file).map_err(|e| match e {
                        Error::Format { message, .. } => Error::Format {
                            path: path.clone(),
                            message,
                        },
                        other => other,
                    })?;
                    traj.noise = Some(cfg.noise);
                    traj
                }
                None => bench::mse_trial_trajectory(&cfg, scenario_index(&cfg, scenario)?, 0)?,
            };
            let traces = bench::track_all(&cfg, &traj)?;
            with_output(out, |w| match format {
                OutputFormat::Csv => bench::export_trace(&traj, &traces, w),
                OutputFormat::Json => {
                    let [kf, garch, nnh] = &traces;
                    json(
                        &TrackOutput {
                            trajectory: &traj,
                            kf,
                            garch,
                            nnh,
                        },
                        w,
                    )
                }
            })
        }
        Command::BenchMse { serial } => {
            cfg.parallel &= !serial;
            let table = bench::run_mse_benchmark(&cfg)?;
            with_output(out, |w| bench::write_results(&table, format, w))
        }
        Command::BenchSnr { serial } => {
            cfg.parallel &= !serial;
            let curve = bench::run_snr_sweep(&cfg)?;
            with_output(out, |w| bench::write_results(&curve, format, w))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
