//! Watching a run step by step: an observer closure records the Newton work
//! and the discrete mass-update defect after every step, here for a small
//! eps where an explicit scheme would need a thousand times more steps.

use apflow::stepper::{mass_update_defect, StepEvent};
use apflow::{run, well_prepared_init, GridSpec, RegimeParams, RunControl, StepConfig};

fn main() -> apflow::Result<()> {
    let eps = 1e-3;
    let g = GridSpec::unit_square(32, 32)?;
    let init = well_prepared_init(g, eps)?;
    let mut worst: f64 = 0.0;
    let mut log = |ev: &StepEvent<'_>| -> apflow::Result<()> {
        let defect = mass_update_defect(ev.previous, ev.state, ev.dt).max_abs();
        worst = worst.max(defect);
        if ev.step.is_multiple_of(20) {
            println!(
                "step {:>4} t={:.4} dt={:.3e} newton={} gmres={} defect={defect:.2e}",
                ev.step, ev.t, ev.dt, ev.stats.newton_iters, ev.stats.linear_iters_total
            );
        }
        Ok(())
    };
    let out = run(
        init,
        &RegimeParams::low_mach(eps)?,
        &StepConfig::default(),
        RunControl::new(0.5).observe_every(1),
        &mut [&mut log],
    )?;
    println!("{} steps, worst mass-update defect {worst:.2e}", out.steps);
    // sound speed sqrt(p'(1)) / eps with p = rho^2
    let dt = out.t / out.steps as f64;
    println!("mean acoustic CFL number: {:.0}", dt * 2f64.sqrt() / (eps * g.dx1()));
    Ok(())
}
