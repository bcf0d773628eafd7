//! SNR improvement of each tracker as the input SNR is swept, with heavy-tailed
//! (two-sided exponential) measurement noise.

use jumptrack::bench::{run_snr_sweep, ExperimentConfig};

fn main() -> jumptrack::Result<()> {
    let curve = run_snr_sweep(&ExperimentConfig::default())?;
    println!("{:>10}{:>10}{:>10}{:>10}", "input dB", "KF", "GARCH", "NNH");
    for row in &curve.rows {
        println!(
            "{:>10.1}{:>10.2}{:>10.2}{:>10.2}",
            row.input_snr_db,
            row.kf_improvement_db,
            row.garch_improvement_db,
            row.nnh_improvement_db
        );
    }
    Ok(())
}
