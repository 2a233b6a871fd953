//! Nonlinear elliptic equation for the new density.
//!
//! Substituting the momentum update
//!
//! ```text
//! q^{n+1} = q^n - dt C^n - (dt / eps^2) G_h P(rho^{n+1}) - (dt / eps^alpha) rho^{n+1} e2
//! ```
//!
//! into the mass update `rho^{n+1} + dt D_h q^{n+1} = rho^n` (with `G_h`, `D_h`
//! the central gradient and divergence, `C^n` the convective update) gives
//!
//! ```text
//! rho - (dt^2 / eps^2) L_h P(rho) - (dt^2 / eps^alpha) D2_h rho = rho^n - dt D_h (q^n - dt C^n) =: b
//! ```
//!
//! with `L_h = D_h G_h`. Because the same operators appear on both sides the
//! elimination is exact: a root of this equation, followed by the explicit
//! momentum evaluation, satisfies the discrete mass update to solver tolerance.

use crate::error::{Result, SolverError};
use crate::fluxes::ConvectiveUpdate;
use crate::grid::{central_divergence, d2_h, laplacian_h, ScalarField, VectorField};
use crate::krylov::{gmres, GmresOptions, SpectralPreconditioner};
use crate::model::{
    check_positive, pressure_derivative_field, pressure_field, ConservedField, RegimeParams,
};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_NEWTON: usize = 50;
/// Step halvings allowed to keep the Newton iterate positive.
pub const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticProblem {
    /// `b = rho^n - Phi_h`.
    pub rhs: ScalarField,
    pub dt: f64,
    pub params: RegimeParams,
}

impl EllipticProblem {
    pub fn new(rhs: ScalarField, dt: f64, params: RegimeParams) -> Result<Self> {
        if !(dt.is_finite() && dt >= 0.0) {
            return Err(SolverError::InvalidParameter {
                name: "dt",
                reason: format!("must be nonnegative, got {dt}"),
            });
        }
        if !rhs.is_finite() {
            return Err(SolverError::InvalidParameter {
                name: "rhs",
                reason: "contains non-finite values".into(),
            });
        }
        Ok(Self { rhs, dt, params })
    }

    /// `dt^2 / eps^2`.
    pub fn pressure_coefficient(&self) -> f64 {
        self.dt * self.dt * self.params.pressure_weight()
    }

    /// `dt^2 / eps^alpha`, or zero without gravity.
    pub fn gravity_coefficient(&self) -> f64 {
        self.dt * self.dt * self.params.gravity_weight()
    }

    /// Newton target `tol (1 + ||b||_inf)`.
    pub fn target(&self, tol: f64) -> f64 {
        tol * (1.0 + self.rhs.max_abs())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    /// Newton corrections applied.
    pub newton_iters: usize,
    /// `||R(rho)||_inf` at exit.
    pub final_residual: f64,
    pub linear_iters_total: usize,
    /// `||R||_inf` before each correction and at exit.
    pub residual_history: Vec<f64>,
}

/// `b = rho^n - dt D_h (q^n - dt C^n)`.
pub fn assemble_rhs(state_n: &ConservedField, conv: &ConvectiveUpdate, dt: f64) -> ScalarField {
    let predicted = VectorField {
        c1: state_n.q1.axpy(-dt, &conv.d1),
        c2: state_n.q2.axpy(-dt, &conv.d2),
    };
    state_n.rho.axpy(-dt, &central_divergence(&predicted))
}

/// `R(rho) = rho - (dt^2/eps^2) L_h P(rho) - (dt^2/eps^alpha) D2_h rho - b`.
pub fn elliptic_residual(rho: &ScalarField, prob: &EllipticProblem) -> Result<ScalarField> {
    let p = pressure_field(rho, prob.params.gamma_eos())?;
    let mut r = rho
        .axpy(-prob.pressure_coefficient(), &laplacian_h(&p))
        .axpy(-1.0, &prob.rhs);
    let cg = prob.gravity_coefficient();
    if cg != 0.0 {
        r = r.axpy(-cg, &d2_h(rho));
    }
    Ok(r)
}

/// Newton's method with GMRES corrections.
///
/// Converged when `||R||_inf <= tol (1 + ||b||_inf)`. Each correction solves
/// `J delta = -R` to relative residual `0.01 tol` (or an absolute floor three
/// orders below the Newton target, whichever is reached first).
pub fn solve_elliptic(
    prob: &EllipticProblem,
    guess: ScalarField,
    tol: f64,
    max_newton: usize,
) -> Result<(ScalarField, SolveStats)> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SolverError::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    check_positive(&guess)?;
    let grid = *prob.rhs.grid();
    let gamma = prob.params.gamma_eos();
    let cp = prob.pressure_coefficient();
    let cg = prob.gravity_coefficient();
    let target = prob.target(tol);

    let mut rho = guess;
    let mut stats = SolveStats::default();
    let mut residual = elliptic_residual(&rho, prob)?;

    loop {
        let rnorm = residual.max_abs();
        stats.residual_history.push(rnorm);
        stats.final_residual = rnorm;
        if rnorm <= target {
            return Ok((rho, stats));
        }
        if stats.newton_iters >= max_newton {
            return Err(SolverError::NonConvergence {
                iterations: stats.newton_iters,
                residual: rnorm,
                target,
            });
        }

        let weight = pressure_derivative_field(&rho, gamma)?;
        let mut pre = SpectralPreconditioner::new(&grid, cp * weight.mean(), cg);
        let mut scratch = ScalarField::zeros(grid);
        let jacobian = |v: &[f64], out: &mut [f64]| {
            for ((s, w), x) in scratch.as_mut_slice().iter_mut().zip(weight.as_slice()).zip(v) {
                *s = w * x;
            }
            let lap = laplacian_h(&scratch);
            out.copy_from_slice(v);
            for (o, l) in out.iter_mut().zip(lap.as_slice()) {
                *o -= cp * l;
            }
            if cg != 0.0 {
                let field = ScalarField::from_vec(grid, v.to_vec()).expect("length checked");
                for (o, d) in out.iter_mut().zip(d2_h(&field).as_slice()) {
                    *o -= cg * d;
                }
            }
        };
        let neg_r: Vec<f64> = residual.as_slice().iter().map(|v| -v).collect();
        let mut delta = vec![0.0; grid.len()];
        let opts = GmresOptions {
            rtol: 0.01 * tol,
            atol: 1e-3 * target,
            ..GmresOptions::default()
        };
        let outcome = gmres(jacobian, |v, o| pre.apply(v, o), &neg_r, &mut delta, &opts);
        stats.linear_iters_total += outcome.iterations;

        let mut step = 1.0;
        let mut halvings = 0;
        let candidate = loop {
            let c: Vec<f64> = rho
                .as_slice()
                .iter()
                .zip(&delta)
                .map(|(r, d)| r + step * d)
                .collect();
            if c.iter().all(|&v| v > 0.0) {
                break ScalarField::from_vec(grid, c)?;
            }
            if halvings == MAX_HALVINGS {
                return Err(SolverError::PositivityLoss { halvings });
            }
            halvings += 1;
            step *= 0.5;
        };
        rho = candidate;
        stats.newton_iters += 1;
        residual = elliptic_residual(&rho, prob)?;
    }
}
