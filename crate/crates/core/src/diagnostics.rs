//! Observables for the low Mach and Boussinesq limits.
//!
//! The leading-order density is estimated by the domain mean of `rho`, the
//! leading-order velocity by `q / rho`, and the divergence constraint is
//! measured with the same central divergence the scheme uses.

use crate::error::Result;
use crate::grid::{central_divergence, GridSpec, ScalarField};
use crate::model::{velocity, ConservedField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApObservables {
    pub t: f64,
    /// `sum rho * cell_area`.
    pub mass: f64,
    /// `||rho - mean(rho)||_inf`.
    pub rho_dev_inf: f64,
    /// `||D_h u||_inf`.
    pub div_inf: f64,
    /// `||D_h u||_{L2(Omega)}`.
    pub div_l2: f64,
    /// Maximal Euclidean speed `|u|`.
    pub umax: f64,
}

impl ApObservables {
    pub const CSV_HEADER: &'static str = "t,mass,rho_dev_inf,div_inf,div_l2,umax";
}

/// Discrete velocity divergence `D_h (q / rho)`.
pub fn velocity_divergence(state: &ConservedField) -> Result<ScalarField> {
    Ok(central_divergence(&velocity(state)?))
}

pub fn observe(state: &ConservedField, t: f64) -> Result<ApObservables> {
    let grid = state.grid();
    let u = velocity(state)?;
    let div = central_divergence(&u);
    let mean = state.rho.mean();
    Ok(ApObservables {
        t,
        mass: state.rho.sum() * grid.cell_area(),
        rho_dev_inf: state.rho.map(|r| r - mean).max_abs(),
        div_inf: div.max_abs(),
        div_l2: div.l2_norm(),
        umax: u.magnitude().max(),
    })
}

/// First-order Boussinesq density `1 - x2 / gamma` at cell centres.
pub fn boussinesq_rho1(grid: GridSpec, gamma_eos: f64) -> ScalarField {
    ScalarField::from_fn(grid, |_, x2| 1.0 - x2 / gamma_eos)
}

/// Net outward velocity flux through the domain boundary, computed as the
/// area-weighted sum of `D_h u` over all cells. Telescoping makes it vanish on
/// periodic grids, which is what keeps the mean density constant.
pub fn boundary_compression_integral(state: &ConservedField) -> Result<f64> {
    let div = velocity_divergence(state)?;
    Ok(div.sum() * state.grid().cell_area())
}
