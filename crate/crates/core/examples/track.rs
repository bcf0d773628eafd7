//! Runs the three trackers on one trajectory and writes a per-step trace CSV
//! (truth, measurements, estimates, volatilities and gains) for plotting.
//!
//! ```text
//! cargo run --example track -- trace.csv
//! ```

use std::fs::File;

use jumptrack::bench::{export_trace, mse_trial_trajectory, track_all, ExperimentConfig};
use jumptrack::metrics::mse;

fn main() -> jumptrack::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "trace.csv".into());
    let cfg = ExperimentConfig::default();
    let traj = mse_trial_trajectory(&cfg, 0, 0)?;
    let traces = track_all(&cfg, &traj)?;

    for (name, trace) in ["kf", "garch", "nnh"].iter().zip(&traces) {
        let peak = trace.sigma2.iter().copied().fold(0.0, f64::max);
        println!(
            "{name:>6}: mse {:6.3}  peak sigma2 {peak:7.3}",
            mse(&trace.x_hat, &traj.states)?
        );
    }

    let file = File::create(&path).map_err(|source| jumptrack::Error::Io {
        path: path.clone().into(),
        source,
    })?;
    export_trace(&traj, &traces, file)?;
    println!("trace written to {path}");
    Ok(())
}
