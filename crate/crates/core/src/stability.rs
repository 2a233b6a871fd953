//! Fourier stability of the semi-discrete scheme applied to the linear wave
//! system
//!
//! ```text
//! rho_t + (ubar . grad) rho + rhobar div u = 0
//! u_t   + (ubar . grad) u   + (abar^2 / (rhobar eps^2)) grad rho = 0
//! ```
//!
//! with the advective terms explicit and the acoustic coupling implicit. The
//! one-step map in Fourier space is the 3x3 amplification matrix `G(dt, xi)`;
//! the report checks the three conditions that make powers of `G` uniformly
//! bounded: bounded entries of `G(0, xi)`, `||G(0, xi)|| <= 1`, and `G` being
//! Lipschitz in `dt` at `dt = 0`.
//!
//! All matrix norms are spectral norms. Frequencies range over `2 pi k` for
//! integer `k` in `[-N, N]^2`, the dual lattice of the unit periodic square.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Result, SolverError};

pub type CMatrix3 = Matrix3<Complex64>;

/// Slack for condition (ii).
pub const NORM_SLACK: f64 = 1e-12;
/// Relative slack when comparing Lipschitz ratios.
pub const RATIO_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationState {
    pub rho_bar: f64,
    pub u_bar: [f64; 2],
    /// Linearised sound speed.
    pub a_bar: f64,
    pub eps: f64,
}

impl LinearizationState {
    pub fn new(rho_bar: f64, u_bar: [f64; 2], a_bar: f64, eps: f64) -> Result<Self> {
        for (name, v) in [("rho_bar", rho_bar), ("a_bar", a_bar), ("eps", eps)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SolverError::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        if !u_bar.iter().all(|v| v.is_finite()) {
            return Err(SolverError::InvalidParameter {
                name: "u_bar",
                reason: "must be finite".into(),
            });
        }
        Ok(Self {
            rho_bar,
            u_bar,
            a_bar,
            eps,
        })
    }

    /// `abar^2 / (rhobar eps^2)`.
    pub fn lambda(&self) -> f64 {
        self.a_bar * self.a_bar / (self.rho_bar * self.eps * self.eps)
    }
}

/// `G(dt, xi)` for the state `lin`.
pub fn amplification_matrix(dt: f64, xi: [f64; 2], lin: &LinearizationState) -> CMatrix3 {
    let i = Complex64::i();
    let rb = lin.rho_bar;
    let lam = lin.lambda();
    let [x1, x2] = xi;
    let udotxi = lin.u_bar[0] * x1 + lin.u_bar[1] * x2;
    let xi2 = x1 * x1 + x2 * x2;
    let prefactor = (Complex64::new(1.0, 0.0) - i * dt * udotxi)
        / (1.0 + dt * dt * rb * lam * xi2);
    let c = |re: f64| Complex64::new(re, 0.0);
    let m = CMatrix3::new(
        c(1.0),
        -i * dt * rb * x1,
        -i * dt * rb * x2,
        -i * dt * lam * x1,
        c(1.0 + dt * dt * rb * lam * x2 * x2),
        c(-dt * dt * rb * lam * x1 * x2),
        -i * dt * lam * x2,
        c(-dt * dt * rb * lam * x1 * x2),
        c(1.0 + dt * dt * rb * lam * x1 * x1),
    );
    m * prefactor
}

/// `dG/d(dt)` at `dt = 0`: `-i (ubar . xi) I` plus the acoustic coupling.
pub fn amplification_derivative(xi: [f64; 2], lin: &LinearizationState) -> CMatrix3 {
    let i = Complex64::i();
    let rb = lin.rho_bar;
    let lam = lin.lambda();
    let [x1, x2] = xi;
    let udotxi = lin.u_bar[0] * x1 + lin.u_bar[1] * x2;
    let z = Complex64::new(0.0, 0.0);
    let coupling = CMatrix3::new(
        z,
        -i * rb * x1,
        -i * rb * x2,
        -i * lam * x1,
        z,
        z,
        -i * lam * x2,
        z,
        z,
    );
    coupling - CMatrix3::identity() * (i * udotxi)
}

/// Largest eigenvalue modulus, from the complex Schur form.
pub fn spectral_radius(m: &CMatrix3) -> f64 {
    let schur = nalgebra::linalg::Schur::new(*m);
    let (_, t) = schur.unpack();
    (0..3).map(|k| t[(k, k)].norm()).fold(0.0, f64::max)
}

/// Largest singular value, via the eigenvalues of the Gram matrix `M^H M`.
pub fn spectral_norm(m: &CMatrix3) -> f64 {
    let gram = m.adjoint() * m;
    let eig = nalgebra::linalg::SymmetricEigen::new(gram);
    eig.eigenvalues.iter().fold(0.0_f64, |a, &v| a.max(v)).max(0.0).sqrt()
}

fn max_entry(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// One `(xi, dt)` sample of the report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub xi1: f64,
    pub xi2: f64,
    pub dt: f64,
    pub spectral_radius: f64,
    /// `||G(dt, xi)||`.
    pub norm: f64,
    /// `||G(dt, xi) - G(0, xi)|| / dt`.
    pub lipschitz_ratio: f64,
}

/// Per-frequency summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySummary {
    pub k: [i64; 2],
    pub xi: [f64; 2],
    /// Largest entry modulus of `G(0, xi)`.
    pub max_entry_g0: f64,
    /// `||G(0, xi)||`.
    pub norm_g0: f64,
    /// `||dG/d(dt)(0, xi)||`, the limit of the ratios as `dt -> 0`.
    pub lipschitz_limit: f64,
    /// Largest ratio over the ladder.
    pub max_ratio: f64,
    pub max_spectral_radius: f64,
    /// Whether each ratio is within `RATIO_SLACK` of the previous, larger `dt`
    /// or below it.
    pub ratios_nonincreasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub lin: LinearizationState,
    pub lattice_radius: usize,
    pub dt_ladder: Vec<f64>,
    pub rows: Vec<StabilityRow>,
    pub frequencies: Vec<FrequencySummary>,
    /// Largest spectral radius of `G(dt, xi)` over all samples.
    pub max_spectral_radius: f64,
    /// Estimated Lipschitz constant `C`: the largest ratio over all samples.
    pub lipschitz_constant: f64,
    /// (i): entries of `G(0, xi)` bounded (finite, at most one) on the lattice.
    pub condition_i: bool,
    /// (ii): `||G(0, xi)|| <= 1 + NORM_SLACK`.
    pub condition_ii: bool,
    /// (iii): every ratio stays below `(1 + RATIO_SLACK)` times the derivative
    /// norm at `dt = 0`, so `G(dt) - G(0) = O(dt)` uniformly on the lattice.
    pub condition_iii: bool,
    /// Ratios non-increasing (within `RATIO_SLACK`) as `dt` halves, for every
    /// frequency. Recorded for information; acoustic modes have ratios that
    /// grow towards their `dt -> 0` limit, so this is generally false.
    pub ratios_nonincreasing: bool,
}

impl StabilityReport {
    pub const CSV_HEADER: &'static str = "xi1,xi2,dt,spectral_radius,norm,lipschitz_ratio";

    pub fn all_conditions_hold(&self) -> bool {
        self.condition_i && self.condition_ii && self.condition_iii
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.xi1, r.xi2, r.dt, r.spectral_radius, r.norm, r.lipschitz_ratio
            )?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| SolverError::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| SolverError::io(path, e))
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.lin;
        writeln!(
            f,
            "linearisation: rho_bar={} u_bar=({}, {}) a_bar={} eps={} lambda={:.6e}",
            l.rho_bar,
            l.u_bar[0],
            l.u_bar[1],
            l.a_bar,
            l.eps,
            l.lambda()
        )?;
        writeln!(
            f,
            "lattice: 2*pi*k, k in [-{n}, {n}]^2 ({} frequencies); dt ladder: {:?}",
            self.frequencies.len(),
            self.dt_ladder,
            n = self.lattice_radius
        )?;
        writeln!(
            f,
            "{:>8} {:>8} {:>14} {:>14} {:>14} {:>14}",
            "k1", "k2", "|G(0)|", "max ratio", "limit", "max rho(G)"
        )?;
        for s in &self.frequencies {
            writeln!(
                f,
                "{:>8} {:>8} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
                s.k[0], s.k[1], s.norm_g0, s.max_ratio, s.lipschitz_limit, s.max_spectral_radius
            )?;
        }
        let verdict = |b: bool| if b { "true" } else { "false" };
        writeln!(f, "max spectral radius: {:.6e}", self.max_spectral_radius)?;
        writeln!(f, "lipschitz constant C: {:.6e}", self.lipschitz_constant)?;
        writeln!(f, "condition (i)   bounded G(0,xi): {}", verdict(self.condition_i))?;
        writeln!(f, "condition (ii)  ||G(0,xi)|| <= 1: {}", verdict(self.condition_ii))?;
        writeln!(f, "condition (iii) lipschitz at dt=0: {}", verdict(self.condition_iii))?;
        write!(
            f,
            "ratios non-increasing as dt halves: {}",
            verdict(self.ratios_nonincreasing)
        )
    }
}

/// Scans the lattice `2 pi [-N, N]^2` over the time-step ladder.
pub fn stability_report(
    lin: &LinearizationState,
    lattice_radius: usize,
    dt_ladder: &[f64],
) -> Result<StabilityReport> {
    if dt_ladder.is_empty() {
        return Err(SolverError::InvalidParameter {
            name: "dt_ladder",
            reason: "must not be empty".into(),
        });
    }
    if !dt_ladder.iter().all(|d| d.is_finite() && *d > 0.0)
        || dt_ladder.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(SolverError::InvalidParameter {
            name: "dt_ladder",
            reason: format!("must be positive and strictly decreasing, got {dt_ladder:?}"),
        });
    }

    let n = lattice_radius as i64;
    let identity = CMatrix3::identity();
    let mut rows = Vec::new();
    let mut frequencies = Vec::new();

    for k1 in -n..=n {
        for k2 in -n..=n {
            let xi = [2.0 * PI * k1 as f64, 2.0 * PI * k2 as f64];
            let g0 = amplification_matrix(0.0, xi, lin);
            let limit = spectral_norm(&amplification_derivative(xi, lin));
            let mut ratios = Vec::with_capacity(dt_ladder.len());
            let mut max_rho: f64 = 0.0;
            for &dt in dt_ladder {
                let g = amplification_matrix(dt, xi, lin);
                let rho = spectral_radius(&g);
                let ratio = spectral_norm(&(g - g0)) / dt;
                max_rho = max_rho.max(rho);
                ratios.push(ratio);
                rows.push(StabilityRow {
                    xi1: xi[0],
                    xi2: xi[1],
                    dt,
                    spectral_radius: rho,
                    norm: spectral_norm(&g),
                    lipschitz_ratio: ratio,
                });
            }
            let nonincreasing = ratios
                .windows(2)
                .all(|w| w[1] <= (1.0 + RATIO_SLACK) * w[0] + NORM_SLACK);
            frequencies.push(FrequencySummary {
                k: [k1, k2],
                xi,
                max_entry_g0: max_entry(&g0),
                norm_g0: spectral_norm(&g0),
                lipschitz_limit: limit,
                max_ratio: ratios.iter().copied().fold(0.0, f64::max),
                max_spectral_radius: max_rho,
                ratios_nonincreasing: nonincreasing,
            });
            debug_assert!(g0 == identity);
        }
    }

    let condition_i = frequencies
        .iter()
        .all(|s| s.max_entry_g0.is_finite() && s.max_entry_g0 <= 1.0 + NORM_SLACK);
    let condition_ii = frequencies.iter().all(|s| s.norm_g0 <= 1.0 + NORM_SLACK);
    let condition_iii = frequencies
        .iter()
        .all(|s| s.max_ratio.is_finite() && s.max_ratio <= (1.0 + RATIO_SLACK) * s.lipschitz_limit + NORM_SLACK);
    let ratios_nonincreasing = frequencies.iter().all(|s| s.ratios_nonincreasing);

    Ok(StabilityReport {
        lin: *lin,
        lattice_radius,
        dt_ladder: dt_ladder.to_vec(),
        max_spectral_radius: rows.iter().map(|r| r.spectral_radius).fold(0.0, f64::max),
        lipschitz_constant: rows.iter().map(|r| r.lipschitz_ratio).fold(0.0, f64::max),
        rows,
        frequencies,
        condition_i,
        condition_ii,
        condition_iii,
        ratios_nonincreasing,
    })
}
