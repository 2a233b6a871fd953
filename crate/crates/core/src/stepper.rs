//! First-order semi-implicit time stepping.
//!
//! One step: explicit Rusanov convective update, Newton solve of the density
//! equation, then explicit evaluation of the momentum. The time step only
//! sees the advective speed, so it does not depend on `eps`.

use crate::diagnostics::{observe, ApObservables};
use crate::elliptic::{
    assemble_rhs, solve_elliptic, EllipticProblem, SolveStats, DEFAULT_MAX_NEWTON, DEFAULT_TOL,
};
use crate::error::{Result, SolverError};
use crate::fluxes::{max_convective_speed, rusanov_convective_divergence};
use crate::grid::{central_divergence, central_gradient, ScalarField};
use crate::model::{pressure_field, ConservedField, RegimeParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub cfl: f64,
    /// Upper bound on `dt`, reached when the flow is (nearly) at rest.
    pub dt_max: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            cfl: 0.45,
            dt_max: 1e-2,
            newton_tol: DEFAULT_TOL,
            max_newton: DEFAULT_MAX_NEWTON,
        }
    }
}

impl StepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::InvalidParameter {
                name: "cfl",
                reason: format!("must lie in (0, 1), got {}", self.cfl),
            });
        }
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(SolverError::InvalidParameter {
                name: "dt_max",
                reason: format!("must be positive, got {}", self.dt_max),
            });
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(SolverError::InvalidParameter {
                name: "newton_tol",
                reason: format!("must be positive, got {}", self.newton_tol),
            });
        }
        Ok(())
    }
}

/// `min(cfl min(dx1, dx2) / s, dt_max)` with `s` the maximal `|u1| + |u2|`.
pub fn compute_dt(state: &ConservedField, cfg: &StepConfig) -> Result<f64> {
    let g = state.grid();
    let speed = max_convective_speed(state)?;
    let h = g.dx1().min(g.dx2());
    if speed == 0.0 {
        return Ok(cfg.dt_max);
    }
    Ok((cfg.cfl * h / speed).min(cfg.dt_max))
}

/// Advances `state_n` by `dt`.
pub fn step(
    state_n: &ConservedField,
    dt: f64,
    params: &RegimeParams,
    cfg: &StepConfig,
) -> Result<(ConservedField, SolveStats)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SolverError::InvalidParameter {
            name: "dt",
            reason: format!("must be positive, got {dt}"),
        });
    }
    let conv = rusanov_convective_divergence(state_n)?;
    let rhs = assemble_rhs(state_n, &conv, dt);
    let prob = EllipticProblem::new(rhs, dt, *params)?;
    let (rho, stats) = solve_elliptic(&prob, state_n.rho.clone(), cfg.newton_tol, cfg.max_newton)?;

    let grad_p = central_gradient(&pressure_field(&rho, params.gamma_eos())?);
    let cp = dt * params.pressure_weight();
    let cg = dt * params.gravity_weight();
    let q1 = state_n.q1.axpy(-dt, &conv.d1).axpy(-cp, &grad_p.c1);
    let mut q2 = state_n.q2.axpy(-dt, &conv.d2).axpy(-cp, &grad_p.c2);
    if cg != 0.0 {
        q2 = q2.axpy(-cg, &rho);
    }
    Ok((ConservedField::new(rho, q1, q2)?, stats))
}

/// `rho^{n+1} - rho^n + dt D_h q^{n+1}`, the defect of the discrete mass update.
pub fn mass_update_defect(prev: &ConservedField, next: &ConservedField, dt: f64) -> ScalarField {
    next.rho
        .axpy(-1.0, &prev.rho)
        .axpy(dt, &central_divergence(&next.momentum()))
}

/// What an observer sees after a step.
#[derive(Debug)]
pub struct StepEvent<'a> {
    /// Number of completed steps.
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub previous: &'a ConservedField,
    pub state: &'a ConservedField,
    pub stats: &'a SolveStats,
}

pub trait Observer {
    fn on_step(&mut self, event: &StepEvent<'_>) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(&StepEvent<'_>) -> Result<()>,
{
    fn on_step(&mut self, event: &StepEvent<'_>) -> Result<()> {
        self(event)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunControl {
    pub t_final: f64,
    /// Observers and the diagnostic series fire every this many steps (and on
    /// the final step).
    pub observe_every: usize,
}

impl RunControl {
    pub fn new(t_final: f64) -> Self {
        Self {
            t_final,
            observe_every: 1,
        }
    }

    pub fn observe_every(mut self, steps: usize) -> Self {
        self.observe_every = steps.max(1);
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: ConservedField,
    pub t: f64,
    pub steps: usize,
    /// Observables at `t = 0`, every `observe_every` steps, and at the end.
    pub series: Vec<ApObservables>,
    pub newton_iters_total: usize,
    pub linear_iters_total: usize,
}

/// Integrates from `t = 0` to `ctl.t_final`, landing exactly on the final time.
pub fn run(
    init: ConservedField,
    params: &RegimeParams,
    cfg: &StepConfig,
    ctl: RunControl,
    observers: &mut [&mut dyn Observer],
) -> Result<RunOutcome> {
    cfg.validate()?;
    if !(ctl.t_final.is_finite() && ctl.t_final > 0.0) {
        return Err(SolverError::InvalidParameter {
            name: "t_final",
            reason: format!("must be positive, got {}", ctl.t_final),
        });
    }
    let every = ctl.observe_every.max(1);
    let mut state = init;
    let mut t = 0.0;
    let mut steps = 0;
    let mut series = vec![observe(&state, t)?];
    let mut newton_iters_total = 0;
    let mut linear_iters_total = 0;
    let fail = |t: f64| move |e: SolverError| SolverError::StepFailed {
        t,
        source: Box::new(e),
    };

    while t < ctl.t_final {
        let mut dt = compute_dt(&state, cfg).map_err(fail(t))?;
        let last = t + dt >= ctl.t_final * (1.0 - 1e-14);
        if last {
            dt = ctl.t_final - t;
        }
        let (next, stats) = step(&state, dt, params, cfg).map_err(fail(t))?;
        steps += 1;
        t = if last { ctl.t_final } else { t + dt };
        newton_iters_total += stats.newton_iters;
        linear_iters_total += stats.linear_iters_total;

        if steps % every == 0 || last {
            let event = StepEvent {
                step: steps,
                t,
                dt,
                previous: &state,
                state: &next,
                stats: &stats,
            };
            for obs in observers.iter_mut() {
                obs.on_step(&event)?;
            }
            series.push(observe(&next, t)?);
        }
        state = next;
    }

    Ok(RunOutcome {
        state,
        t,
        steps,
        series,
        newton_iters_total,
        linear_iters_total,
    })
}
