//! The Boussinesq regime (alpha = 1): gravity scales like 1/eps.
//!
//! On a periodic domain there is no wall to hold up a hydrostatic profile, so
//! gravity accelerates the whole fluid: the mean vertical velocity follows
//! `-t / eps` while density and divergence still relax to the limit.

use apflow::experiment::run_well_prepared;
use apflow::model::velocity;
use apflow::RunConfig;

fn main() -> apflow::Result<()> {
    let cfg = RunConfig::boussinesq();
    let e = run_well_prepared(&cfg)?;
    let last = e.last();
    println!("eps = {}, alpha = {}, {} steps", cfg.eps, cfg.alpha, e.outcome.steps);
    println!("rho_dev_inf = {:.6e}", last.rho_dev_inf);
    println!("div_inf     = {:.6e} (t = 0: {:.6e})", last.div_inf, e.first().div_inf);
    println!("umax        = {:.4}", last.umax);
    let u = velocity(&e.outcome.state)?;
    println!(
        "mean u2     = {:.6} (free fall: {:.6})",
        u.c2.mean(),
        -cfg.t_final / cfg.eps
    );
    Ok(())
}
