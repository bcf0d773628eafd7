//! Draws one compound-Poisson trajectory, adds two kinds of noise, and prints a
//! short summary of each.
//!
//! ```text
//! cargo run --example simulate
//! ```

use jumptrack::sim::{
    observe, rng_from_seed, simulate_jump_process, JumpProcessParams, NoiseKind, NoiseSpec,
};

fn main() -> jumptrack::Result<()> {
    let params = JumpProcessParams::new(2.0, 0.0, 8.0)?;
    let mut rng = rng_from_seed(1);
    let truth = simulate_jump_process(&params, &mut rng)?;

    println!(
        "{} samples, {} jumps at {} distinct steps",
        truth.len(),
        truth.total_jumps(),
        truth.jump_indices().count()
    );
    println!("first jumps:");
    for k in truth.jump_indices().take(5) {
        println!(
            "  t={:5.1}  {:+8.3} -> {:+8.3}",
            truth.times[k],
            truth.states[k - 1],
            truth.states[k]
        );
    }

    for kind in [NoiseKind::Gaussian, NoiseKind::TwoSidedExponential] {
        let observed = observe(&truth, &NoiseSpec::new(kind, 10.0)?, &mut rng)?;
        let noise: Vec<f64> = observed
            .measurements()?
            .iter()
            .zip(&truth.states)
            .map(|(y, x)| y - x)
            .collect();
        let n = noise.len() as f64;
        let var = noise.iter().map(|e| e * e).sum::<f64>() / n;
        let kurt = noise.iter().map(|e| e.powi(4)).sum::<f64>() / n / (var * var);
        println!(
            "{:<24} sample variance {var:6.2}  kurtosis {kurt:5.2}",
            kind.as_str()
        );
    }
    Ok(())
}
