//! Conserved state, isentropic equation of state and regime parameters.
//!
//! The momentum equation carries `grad p / Ma^2` with `Ma = eps` and the
//! gravity source `-rho e2 / Fr^2` with `Fr^2 = eps^alpha`. `alpha = 0` is the
//! low Mach number regime, `alpha = 1` the Boussinesq regime.

use std::f64::consts::PI;

use crate::error::{Result, SolverError};
use crate::grid::{GridSpec, ScalarField, VectorField};

/// Default EOS exponent, `p = rho^2`.
pub const DEFAULT_GAMMA: f64 = 2.0;

/// Froude scaling exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `alpha = 0`, `Fr = 1`.
    LowMach,
    /// `alpha = 1`, `Fr = sqrt(eps)`.
    Boussinesq,
}

impl Regime {
    pub fn alpha(self) -> u8 {
        match self {
            Regime::LowMach => 0,
            Regime::Boussinesq => 1,
        }
    }

    pub fn from_alpha(alpha: u8) -> Result<Self> {
        match alpha {
            0 => Ok(Regime::LowMach),
            1 => Ok(Regime::Boussinesq),
            other => Err(SolverError::InvalidParameter {
                name: "alpha",
                reason: format!("must be 0 or 1, got {other}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    eps: f64,
    regime: Regime,
    gamma_eos: f64,
    gravity_on: bool,
}

impl RegimeParams {
    pub fn new(eps: f64, alpha: u8, gamma_eos: f64, gravity_on: bool) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(SolverError::InvalidParameter {
                name: "eps",
                reason: format!("must be positive, got {eps}"),
            });
        }
        if !(gamma_eos.is_finite() && gamma_eos > 1.0) {
            return Err(SolverError::InvalidParameter {
                name: "gamma_eos",
                reason: format!("must exceed 1, got {gamma_eos}"),
            });
        }
        Ok(Self {
            eps,
            regime: Regime::from_alpha(alpha)?,
            gamma_eos,
            gravity_on,
        })
    }

    /// Low Mach regime with `gamma = 2` and gravity on.
    pub fn low_mach(eps: f64) -> Result<Self> {
        Self::new(eps, 0, DEFAULT_GAMMA, true)
    }

    /// Boussinesq regime with `gamma = 2` and gravity on.
    pub fn boussinesq(eps: f64) -> Result<Self> {
        Self::new(eps, 1, DEFAULT_GAMMA, true)
    }

    pub fn with_gravity(mut self, on: bool) -> Self {
        self.gravity_on = on;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn alpha(&self) -> u8 {
        self.regime.alpha()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn gamma_eos(&self) -> f64 {
        self.gamma_eos
    }

    pub fn gravity_on(&self) -> bool {
        self.gravity_on
    }

    pub fn mach(&self) -> f64 {
        self.eps
    }

    pub fn froude(&self) -> f64 {
        self.eps.powf(0.5 * f64::from(self.alpha()))
    }

    /// `1 / eps^2`, the weight of the pressure gradient.
    pub fn pressure_weight(&self) -> f64 {
        1.0 / (self.eps * self.eps)
    }

    /// `1 / eps^alpha` when gravity is on, zero otherwise.
    pub fn gravity_weight(&self) -> f64 {
        if self.gravity_on {
            1.0 / self.eps.powi(i32::from(self.alpha()))
        } else {
            0.0
        }
    }
}

/// `P(rho) = rho^gamma`.
pub fn pressure(rho: f64, gamma_eos: f64) -> Result<f64> {
    check_density(rho, 0)?;
    Ok(rho.powf(gamma_eos))
}

/// `P'(rho) = gamma rho^(gamma - 1)`.
pub fn pressure_derivative(rho: f64, gamma_eos: f64) -> Result<f64> {
    check_density(rho, 0)?;
    Ok(gamma_eos * rho.powf(gamma_eos - 1.0))
}

pub fn pressure_field(rho: &ScalarField, gamma_eos: f64) -> Result<ScalarField> {
    check_positive(rho)?;
    Ok(rho.map(|r| r.powf(gamma_eos)))
}

pub fn pressure_derivative_field(rho: &ScalarField, gamma_eos: f64) -> Result<ScalarField> {
    check_positive(rho)?;
    Ok(rho.map(|r| gamma_eos * r.powf(gamma_eos - 1.0)))
}

#[inline]
fn check_density(rho: f64, cell: usize) -> Result<()> {
    // NaN fails this comparison as well
    if rho > 0.0 {
        Ok(())
    } else {
        Err(SolverError::Positivity { cell, value: rho })
    }
}

/// Errors on the first cell whose value is not strictly positive.
pub fn check_positive(rho: &ScalarField) -> Result<()> {
    rho.as_slice()
        .iter()
        .enumerate()
        .try_for_each(|(cell, &r)| check_density(r, cell))
}

/// Density and momentum `q = rho u` at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField {
    pub rho: ScalarField,
    pub q1: ScalarField,
    pub q2: ScalarField,
}

impl ConservedField {
    pub fn new(rho: ScalarField, q1: ScalarField, q2: ScalarField) -> Result<Self> {
        if rho.grid() != q1.grid() || rho.grid() != q2.grid() {
            return Err(SolverError::InvalidGrid(
                "density and momentum live on different grids".into(),
            ));
        }
        check_positive(&rho)?;
        Ok(Self { rho, q1, q2 })
    }

    /// Spatially uniform state.
    pub fn uniform(grid: GridSpec, rho: f64, q: (f64, f64)) -> Result<Self> {
        Self::new(
            ScalarField::constant(grid, rho),
            ScalarField::constant(grid, q.0),
            ScalarField::constant(grid, q.1),
        )
    }

    pub fn grid(&self) -> &GridSpec {
        self.rho.grid()
    }

    pub fn momentum(&self) -> VectorField {
        VectorField {
            c1: self.q1.clone(),
            c2: self.q2.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.q1.is_finite() && self.q2.is_finite()
    }
}

/// Well-prepared data `(rho, q1, q2)` at a point.
pub fn well_prepared_point(x1: f64, x2: f64, eps: f64) -> (f64, f64, f64) {
    let e2 = eps * eps;
    let plus = 2.0 * PI * (x1 + x2);
    let shear = (2.0 * PI * (x1 - x2)).sin();
    let rho = 1.0 + e2 * plus.sin().powi(2);
    let q1 = shear + e2 * plus.sin();
    let q2 = shear + e2 * plus.cos();
    (rho, q1, q2)
}

/// Well-prepared initial data sampled at cell centres.
pub fn well_prepared_init(grid: GridSpec, eps: f64) -> Result<ConservedField> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(SolverError::InvalidParameter {
            name: "eps",
            reason: format!("must be positive, got {eps}"),
        });
    }
    let rho = ScalarField::from_fn(grid, |x1, x2| well_prepared_point(x1, x2, eps).0);
    let q1 = ScalarField::from_fn(grid, |x1, x2| well_prepared_point(x1, x2, eps).1);
    let q2 = ScalarField::from_fn(grid, |x1, x2| well_prepared_point(x1, x2, eps).2);
    ConservedField::new(rho, q1, q2)
}

/// `u = q / rho`.
pub fn velocity(state: &ConservedField) -> Result<VectorField> {
    check_positive(&state.rho)?;
    Ok(VectorField {
        c1: state.q1.zip_map(&state.rho, |q, r| q / r),
        c2: state.q2.zip_map(&state.rho, |q, r| q / r),
    })
}
