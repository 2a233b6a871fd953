//! The well-prepared low Mach number run (eps = 0.1, alpha = 0, 50x50, T = 1).
//!
//! ```text
//! cargo run --release --example low_mach [output-dir]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use apflow::experiment::run_well_prepared;
use apflow::RunConfig;

fn main() -> apflow::Result<()> {
    let cfg = RunConfig::low_mach();
    let start = Instant::now();
    let e = run_well_prepared(&cfg)?;
    let (first, last) = (e.first(), e.last());
    println!(
        "{} steps to t = {} in {:.2?} ({} Newton, {} GMRES iterations)",
        e.outcome.steps,
        e.outcome.t,
        start.elapsed(),
        e.outcome.newton_iters_total,
        e.outcome.linear_iters_total
    );
    println!("{:>10} {:>14} {:>14} {:>10}", "", "rho_dev_inf", "div_inf", "umax");
    for (name, o) in [("t = 0", first), ("t = T", last)] {
        println!("{name:>10} {:>14.6e} {:>14.6e} {:>10.4}", o.rho_dev_inf, o.div_inf, o.umax);
    }
    println!("mass drift: {:.3e}", (last.mass - first.mass).abs() / first.mass);

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        for f in e.write(&dir)? {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}
