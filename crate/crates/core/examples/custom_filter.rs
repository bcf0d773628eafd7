//! Steps the NNH tracker by hand with a non-default HGF and shows how the
//! volatility reacts to a level shift.

use jumptrack::filters::{run_filter, FilterConfig, NnhConfig};
use jumptrack::hgf::HgfParams;

fn main() -> jumptrack::Result<()> {
    let cfg = NnhConfig {
        hgf: HgfParams::new(80.0, 4.0)?.with_rho(0.5)?,
        r: 4.0,
        ..NnhConfig::default()
    };
    let cfg = FilterConfig::Nnh(cfg);
    cfg.validate()?;

    // a clean step from 0 to 12 halfway through
    let ys: Vec<f64> = (0..30).map(|k| if k < 15 { 0.0 } else { 12.0 }).collect();
    let trace = run_filter(&cfg, &ys)?;
    let h = trace.h.as_deref().unwrap_or_default();
    println!(
        "{:>3}{:>8}{:>10}{:>10}{:>8}{:>9}",
        "k", "y", "x_hat", "sigma2", "gain", "h"
    );
    for k in 10..25 {
        println!(
            "{k:>3}{:>8.2}{:>10.3}{:>10.3}{:>8.3}{:>9.3}",
            ys[k], trace.x_hat[k], trace.sigma2[k], trace.k_gain[k], h[k]
        );
    }
    Ok(())
}
