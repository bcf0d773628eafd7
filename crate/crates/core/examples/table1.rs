//! Monte Carlo MSE of the constant-Q, GARCH and NNH trackers on the four default
//! jump scenarios, 200 trials each.

use jumptrack::bench::{run_mse_benchmark, ExperimentConfig};

fn main() -> jumptrack::Result<()> {
    let cfg = ExperimentConfig::default();
    let table = run_mse_benchmark(&cfg)?;
    println!("{:<28}{:>16}{:>16}{:>16}", "scenario", "KF", "GARCH", "NNH");
    for row in &table.rows {
        let cell = |m: f64, se: f64| format!("{m:.3} ± {se:.3}");
        println!(
            "{:<28}{:>16}{:>16}{:>16}",
            row.scenario,
            cell(row.kf_mse, row.kf_se),
            cell(row.garch_mse, row.garch_se),
            cell(row.nnh_mse, row.nnh_se)
        );
    }
    Ok(())
}
