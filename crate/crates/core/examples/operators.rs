//! The grid operators on their own: central differences, the wide Laplacian
//! and the explicit Rusanov update, checked against closed forms.

use std::f64::consts::PI;

use apflow::fluxes::{max_convective_speed, rusanov_convective_divergence};
use apflow::grid::{central_divergence, central_gradient, laplacian_h};
use apflow::{ConservedField, GridSpec, ScalarField};

fn main() -> apflow::Result<()> {
    let k = 2.0 * PI;
    for n in [16, 32, 64] {
        let g = GridSpec::unit_square(n, n)?;
        let h = g.dx1();
        let f = ScalarField::from_fn(g, |x, y| (k * x).sin() * (k * y).sin());
        let grad = central_gradient(&f);
        let exact = ScalarField::from_fn(g, |x, y| k * (k * x).cos() * (k * y).sin());
        let lap = laplacian_h(&f);
        // the wide stencil has symbol -sin^2(k h)/h^2 per axis
        let symbol = -2.0 * (k * h).sin().powi(2) / (h * h);
        println!(
            "n={n:>3}  |d1 f - f_x| = {:.3e}  |L_h f - symbol f| = {:.1e}  sum(div grad f) = {:.1e}",
            grad.c1.axpy(-1.0, &exact).max_abs(),
            lap.axpy(-symbol, &f).max_abs(),
            central_divergence(&grad).sum()
        );
    }

    let g = GridSpec::unit_square(32, 32)?;
    let rho = ScalarField::from_fn(g, |x, _| 1.0 + 0.2 * (k * x).sin());
    let q1 = rho.map(|r| r * 0.7);
    let q2 = ScalarField::from_fn(g, |x, y| 0.3 * (k * (x + y)).cos());
    let s = ConservedField::new(rho, q1, q2)?;
    let conv = rusanov_convective_divergence(&s)?;
    println!(
        "rusanov: max speed {:.4}, sum of updates ({:.1e}, {:.1e})",
        max_convective_speed(&s)?,
        conv.d1.sum(),
        conv.d2.sum()
    );
    Ok(())
}
