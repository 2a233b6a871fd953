//! Asymptotic-preserving finite-volume solver for the scaled isentropic Euler
//! equations with gravity,
//!
//! ```text
//! rho_t + div(rho u) = 0
//! (rho u)_t + div(rho u (x) u) + grad p / eps^2 = -rho e2 / eps^alpha,   p = rho^gamma
//! ```
//!
//! on a doubly periodic rectangle. `alpha = 0` gives the low Mach number limit
//! (incompressible flow), `alpha = 1` the Boussinesq limit.
//!
//! The time discretisation is first-order semi-implicit: the convective flux is
//! explicit (Rusanov), the pressure gradient and gravity are implicit. The
//! momentum is eliminated to give a nonlinear elliptic equation for the new
//! density, solved by Newton-GMRES ([`elliptic`]); the momentum then follows
//! explicitly ([`stepper`]). The time step is limited by the flow speed alone,
//! independent of `eps`.
//!
//! [`stability`] evaluates the Fourier amplification matrix of the scheme
//! applied to the linearised wave system and checks the conditions for
//! L2-stability. [`diagnostics`] measures how close a state is to the limit
//! manifold.

pub mod config;
pub mod diagnostics;
pub mod elliptic;
pub mod error;
pub mod experiment;
pub mod fluxes;
pub mod grid;
pub mod krylov;
pub mod model;
pub mod output;
pub mod stability;
pub mod stepper;

pub use config::{parse_config, RunConfig};
pub use diagnostics::{observe, ApObservables};
pub use error::{Result, SolverError};
pub use grid::{GridSpec, ScalarField, VectorField};
pub use model::{well_prepared_init, ConservedField, RegimeParams};
pub use stepper::{compute_dt, run, step, RunControl, RunOutcome, StepConfig};
