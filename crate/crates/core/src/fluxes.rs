//! Explicit Rusanov discretisation of the convective momentum flux
//! `div(q (x) q / rho)`.
//!
//! Face states are the adjacent cell averages. The dissipation speed at a
//! face normal to axis `k` is `max(|u_k,L|, |u_k,R|)`: acoustic speeds are
//! absent because the pressure gradient is treated implicitly.

use crate::error::Result;
use crate::grid::ScalarField;
use crate::model::{velocity, ConservedField};

/// Divergence of the convective flux tensor, one field per momentum component.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvectiveUpdate {
    pub d1: ScalarField,
    pub d2: ScalarField,
}

/// Rusanov flux for one momentum component across a face normal to axis `k`.
///
/// `un_*` is the normal velocity and `q_*` the transported momentum component
/// on each side.
#[inline]
pub fn rusanov_face_flux(un_l: f64, q_l: f64, un_r: f64, q_r: f64) -> f64 {
    let s = un_l.abs().max(un_r.abs());
    0.5 * (un_l * q_l + un_r * q_r) - 0.5 * s * (q_r - q_l)
}

pub fn rusanov_convective_divergence(state: &ConservedField) -> Result<ConvectiveUpdate> {
    let u = velocity(state)?;
    let g = *state.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut d1 = ScalarField::zeros(g);
    let mut d2 = ScalarField::zeros(g);

    // Faces normal to x1: face (i, j) sits between cells (i, j) and (i+1, j).
    let inv1 = 1.0 / g.dx1();
    for j in 0..ny {
        for i in 0..nx {
            let r = (i + 1) % nx;
            let (ul, ur) = (u.c1[(i, j)], u.c1[(r, j)]);
            let f1 = rusanov_face_flux(ul, state.q1[(i, j)], ur, state.q1[(r, j)]) * inv1;
            let f2 = rusanov_face_flux(ul, state.q2[(i, j)], ur, state.q2[(r, j)]) * inv1;
            d1[(i, j)] += f1;
            d1[(r, j)] -= f1;
            d2[(i, j)] += f2;
            d2[(r, j)] -= f2;
        }
    }

    // Faces normal to x2.
    let inv2 = 1.0 / g.dx2();
    for j in 0..ny {
        let t = (j + 1) % ny;
        for i in 0..nx {
            let (ul, ur) = (u.c2[(i, j)], u.c2[(i, t)]);
            let f1 = rusanov_face_flux(ul, state.q1[(i, j)], ur, state.q1[(i, t)]) * inv2;
            let f2 = rusanov_face_flux(ul, state.q2[(i, j)], ur, state.q2[(i, t)]) * inv2;
            d1[(i, j)] += f1;
            d1[(i, t)] -= f1;
            d2[(i, j)] += f2;
            d2[(i, t)] -= f2;
        }
    }

    Ok(ConvectiveUpdate { d1, d2 })
}

/// `max_cells (|u1| + |u2|)`, the speed that limits the explicit subsystem.
pub fn max_convective_speed(state: &ConservedField) -> Result<f64> {
    let u = velocity(state)?;
    Ok(u
        .c1
        .as_slice()
        .iter()
        .zip(u.c2.as_slice())
        .fold(0.0, |m: f64, (a, b)| m.max(a.abs() + b.abs())))
}
