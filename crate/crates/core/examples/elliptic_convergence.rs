//! Convergence of the nonlinear pressure solve. The right-hand side comes from
//! the continuous operator applied to a known density, so the discrete
//! solution differs from it by the O(h^2) truncation error of the stencils.

use std::f64::consts::PI;

use apflow::elliptic::{solve_elliptic, EllipticProblem};
use apflow::{GridSpec, RegimeParams, ScalarField};

fn main() -> apflow::Result<()> {
    let params = RegimeParams::new(0.1, 1, 2.0, true)?;
    let dt: f64 = 0.05;
    let cp = dt * dt / (params.eps() * params.eps());
    let cg = dt * dt / params.eps();
    let (k, a) = (2.0 * PI, 0.1);

    println!("{:>6} {:>12} {:>8} {:>8} {:>8}", "n", "max error", "order", "newton", "gmres");
    let mut prev: Option<f64> = None;
    for n in [16, 32, 64, 128, 256] {
        let g = GridSpec::unit_square(n, n)?;
        let exact = ScalarField::from_fn(g, |x, y| 1.0 + a * (k * x).sin() * (k * y).sin());
        let rhs = ScalarField::from_fn(g, |x, y| {
            let (sx, cx, sy, cy) = ((k * x).sin(), (k * x).cos(), (k * y).sin(), (k * y).cos());
            let r = 1.0 + a * sx * sy;
            let (rx, ry) = (a * k * cx * sy, a * k * sx * cy);
            let lap_p = 2.0 * (rx * rx + ry * ry) - 4.0 * k * k * a * sx * sy * r;
            r - cp * lap_p - cg * ry
        });
        let prob = EllipticProblem::new(rhs, dt, params)?;
        let (rho, stats) = solve_elliptic(&prob, ScalarField::constant(g, 1.0), 1e-11, 50)?;
        let err = rho.axpy(-1.0, &exact).max_abs();
        let order = prev.map_or(String::new(), |p| format!("{:.3}", (p / err).log2()));
        println!(
            "{n:>6} {err:>12.4e} {order:>8} {:>8} {:>8}",
            stats.newton_iters, stats.linear_iters_total
        );
        prev = Some(err);
    }
    Ok(())
}
