//! Matrix-free restarted GMRES and the FFT preconditioner used for the Newton
//! corrections of the density equation.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Krylov dimension before restart.
    pub restart: usize,
    pub max_iters: usize,
    /// Stop once `||r|| <= max(rtol ||b||, atol)` (Euclidean norms).
    pub rtol: f64,
    pub atol: f64,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            restart: 40,
            max_iters: 500,
            rtol: 1e-10,
            atol: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOutcome {
    pub iterations: usize,
    /// True residual norm `||b - A x||` at exit.
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned GMRES for `A x = b`, starting from the given `x`.
///
/// `apply(v, out)` computes `out = A v`; `precond(v, out)` computes
/// `out = M^{-1} v`.
pub fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut precond: impl FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    opts: &GmresOptions,
) -> GmresOutcome {
    let n = b.len();
    let m = opts.restart.max(1);
    let target = (opts.rtol * norm(b)).max(opts.atol);

    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let residual = |apply: &mut dyn FnMut(&[f64], &mut [f64]), x: &[f64], r: &mut [f64]| {
        apply(x, r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        norm(r)
    };

    let mut beta = residual(&mut apply, x, &mut r);
    let mut iterations = 0;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut zs: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut h = vec![vec![0.0; m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];

    while beta > target && iterations < opts.max_iters {
        basis.clear();
        zs.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut k_used = 0;
        for k in 0..m {
            let mut z = vec![0.0; n];
            precond(&basis[k], &mut z);
            apply(&z, &mut w);
            zs.push(z);
            iterations += 1;

            // modified Gram-Schmidt
            for (i, v) in basis.iter().enumerate() {
                let hik = dot(&w, v);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj -= hik * vj;
                }
            }
            let hk1 = norm(&w);
            h[k + 1][k] = hk1;

            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = h[k][k] / denom;
                sn[k] = h[k + 1][k] / denom;
            }
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];

            k_used = k + 1;
            if g[k + 1].abs() <= target || hk1 == 0.0 || iterations >= opts.max_iters {
                break;
            }
            basis.push(w.iter().map(|v| v / hk1).collect());
        }

        // back substitution for the least-squares coefficients
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, z) in y.iter().zip(&zs) {
            for (xj, zj) in x.iter_mut().zip(z) {
                *xj += yi * zj;
            }
        }
        let previous = beta;
        beta = residual(&mut apply, x, &mut r);
        if beta.is_nan() || beta >= previous {
            // stagnation at rounding level
            break;
        }
    }

    GmresOutcome {
        iterations,
        residual: beta,
        converged: beta <= target,
    }
}

/// Exact inverse of the constant-coefficient operator
/// `v - c_p w L_h v - c_g D2_h v` on a periodic grid, applied via 2D FFT.
///
/// `L_h` is the wide Laplacian with symbol `-(sin t1 / h1)^2 - (sin t2 / h2)^2`
/// and `D2_h` the central vertical derivative with symbol `i sin t2 / h2`.
pub struct SpectralPreconditioner {
    nx: usize,
    ny: usize,
    inv_symbol: Vec<Complex64>,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    tbuf: Vec<Complex64>,
}

impl SpectralPreconditioner {
    /// `diffusion` is `c_p * w` (a mean of `dt^2 P'(rho) / eps^2`), `drift`
    /// is `c_g`.
    pub fn new(grid: &GridSpec, diffusion: f64, drift: f64) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        let mut planner = FftPlanner::new();
        let s1: Vec<f64> = (0..nx)
            .map(|k| (2.0 * std::f64::consts::PI * k as f64 / nx as f64).sin() / grid.dx1())
            .collect();
        let s2: Vec<f64> = (0..ny)
            .map(|k| (2.0 * std::f64::consts::PI * k as f64 / ny as f64).sin() / grid.dx2())
            .collect();
        // stored column-major (k1 outer) to match the transposed layout
        let scale = 1.0 / (nx * ny) as f64;
        let mut inv_symbol = Vec::with_capacity(nx * ny);
        for a in &s1 {
            for b in &s2 {
                let symbol = Complex64::new(1.0 + diffusion * (a * a + b * b), -drift * b);
                inv_symbol.push(scale / symbol);
            }
        }
        Self {
            nx,
            ny,
            inv_symbol,
            row_fwd: planner.plan_fft_forward(nx),
            row_inv: planner.plan_fft_inverse(nx),
            col_fwd: planner.plan_fft_forward(ny),
            col_inv: planner.plan_fft_inverse(ny),
            buf: vec![Complex64::new(0.0, 0.0); nx * ny],
            tbuf: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    pub fn apply(&mut self, r: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.nx, self.ny);
        for (c, &v) in self.buf.iter_mut().zip(r) {
            *c = Complex64::new(v, 0.0);
        }
        self.row_fwd.process(&mut self.buf);
        for j in 0..ny {
            for i in 0..nx {
                self.tbuf[i * ny + j] = self.buf[j * nx + i];
            }
        }
        self.col_fwd.process(&mut self.tbuf);
        for (c, s) in self.tbuf.iter_mut().zip(&self.inv_symbol) {
            *c *= s;
        }
        self.col_inv.process(&mut self.tbuf);
        for j in 0..ny {
            for i in 0..nx {
                self.buf[j * nx + i] = self.tbuf[i * ny + j];
            }
        }
        self.row_inv.process(&mut self.buf);
        for (o, c) in out.iter_mut().zip(&self.buf) {
            *o = c.re;
        }
    }
}
