//! Fourier stability of the linearised scheme: spectral radii of the
//! amplification matrix over a frequency lattice, and the three stability
//! conditions, for a fast and a slow sound speed.
//!
//! With a mean flow the convective factor `1 - i dt (u . xi)` has modulus
//! above one, so spectral radii exceed one at large `dt |xi|`; the conditions
//! only concern the limit `dt -> 0`.

use apflow::stability::{stability_report, LinearizationState};

fn main() -> apflow::Result<()> {
    let ladder = [0.1, 0.05, 0.025, 0.0125];
    for eps in [1.0, 1e-2] {
        let lin = LinearizationState::new(1.0, [1.0, 0.5], 1.0, eps)?;
        let report = stability_report(&lin, 2, &ladder)?;
        println!("{report}\n");
    }
    Ok(())
}
