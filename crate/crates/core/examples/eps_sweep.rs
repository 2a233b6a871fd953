//! Sweeps `eps` at a fixed grid and CFL number. The step count does not depend
//! on `eps`, and the distance to the limit shrinks like `eps^2`.

use apflow::experiment::{format_sweep, sweep_eps};
use apflow::RunConfig;

fn main() -> apflow::Result<()> {
    let eps = [0.1, 0.05, 0.025, 0.01, 0.001];
    let rows = sweep_eps(&RunConfig::low_mach(), &eps, true)?;
    print!("{}", format_sweep(&rows));
    println!();
    println!("per-halving reduction");
    for w in rows.windows(2).filter(|w| (w[0].eps / w[1].eps - 2.0).abs() < 1e-12) {
        println!(
            "{:>10.4e} -> {:<10.4e} rho_dev {:6.3}  div {:6.3}",
            w[0].eps,
            w[1].eps,
            w[0].rho_dev_inf / w[1].rho_dev_inf,
            w[0].div_inf / w[1].div_inf
        );
    }
    Ok(())
}
