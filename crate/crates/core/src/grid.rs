//! Doubly periodic structured grid and the central-difference operators used
//! by the implicit part of the scheme.
//!
//! Cells are stored row-major: the flat index of cell `(i, j)` is `j * nx + i`,
//! with `i` running along the first axis `x1` and `j` along the second axis
//! `x2`. Gravity acts along `-x2`.
//!
//! All stencils wrap periodically through index arithmetic. The discrete
//! Laplacian is *defined* as `central_divergence(central_gradient(f))`, i.e. the
//! wide five-point stencil with spacing `2h`, so that eliminating the momentum
//! between the discrete mass and momentum updates is exact.

use std::ops::{Index, IndexMut};

use crate::error::{Result, SolverError};

/// Smallest admissible number of cells per axis.
pub const MIN_CELLS: usize = 4;

/// Uniform rectangular grid with periodic topology in both directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    x1_min: f64,
    x1_max: f64,
    x2_min: f64,
    x2_max: f64,
    dx1: f64,
    dx2: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, x1: (f64, f64), x2: (f64, f64)) -> Result<Self> {
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(SolverError::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells per axis, got {nx}x{ny}"
            )));
        }
        let bounds_ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && hi > lo;
        if !bounds_ok(x1) || !bounds_ok(x2) {
            return Err(SolverError::InvalidGrid(format!(
                "domain bounds must be finite and increasing, got {x1:?} x {x2:?}"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x1_min: x1.0,
            x1_max: x1.1,
            x2_min: x2.0,
            x2_max: x2.1,
            dx1: (x1.1 - x1.0) / nx as f64,
            dx2: (x2.1 - x2.0) / ny as f64,
        })
    }

    /// Grid on the unit square `[0,1] x [0,1]`.
    pub fn unit_square(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, (0.0, 1.0), (0.0, 1.0))
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx1(&self) -> f64 {
        self.dx1
    }

    pub fn dx2(&self) -> f64 {
        self.dx2
    }

    pub fn x1_bounds(&self) -> (f64, f64) {
        (self.x1_min, self.x1_max)
    }

    pub fn x2_bounds(&self) -> (f64, f64) {
        (self.x2_min, self.x2_max)
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.dx1 * self.dx2
    }

    /// Area of the whole domain.
    pub fn area(&self) -> f64 {
        (self.x1_max - self.x1_min) * (self.x2_max - self.x2_min)
    }

    /// Flat index of cell `(i, j)`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Centre of cell `(i, j)`.
    #[inline]
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x1_min + (i as f64 + 0.5) * self.dx1,
            self.x2_min + (j as f64 + 0.5) * self.dx2,
        )
    }

    /// Iterator over `(i, j)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> {
        let nx = self.nx;
        (0..self.ny).flat_map(move |j| (0..nx).map(move |i| (i, j)))
    }

    #[inline]
    fn wrap(n: usize, i: usize, offset: isize) -> usize {
        (i as isize + offset).rem_euclid(n as isize) as usize
    }
}

/// Cell-centred scalar field on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            grid,
            data: vec![value; grid.len()],
        }
    }

    /// Evaluates `f(x1, x2)` at every cell centre.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let data = grid
            .cells()
            .map(|(i, j)| {
                let (x1, x2) = grid.center(i, j);
                f(x1, x2)
            })
            .collect();
        Self { grid, data }
    }

    pub fn from_vec(grid: GridSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(SolverError::ShapeMismatch {
                expected: grid.len(),
                found: data.len(),
            });
        }
        Ok(Self { grid, data })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + scale * b)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.data.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Euclidean norm of the raw cell values.
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Discrete `L2(Omega)` norm, weighted by the cell area.
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Cyclic shift by `(di, dj)` cells: `out(i, j) = self(i - di, j - dj)`.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let g = self.grid;
        let mut out = Self::zeros(g);
        for (i, j) in g.cells() {
            let si = GridSpec::wrap(g.nx, i, -di);
            let sj = GridSpec::wrap(g.ny, j, -dj);
            out.data[g.index(i, j)] = self.data[g.index(si, sj)];
        }
        out
    }

    /// Value at `(i + di, j + dj)` with periodic wrap.
    #[inline]
    pub fn at_offset(&self, i: usize, j: usize, di: isize, dj: isize) -> f64 {
        let g = &self.grid;
        self.data[g.index(GridSpec::wrap(g.nx, i, di), GridSpec::wrap(g.ny, j, dj))]
    }
}

impl Index<(usize, usize)> for ScalarField {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[self.grid.index(i, j)]
    }
}

impl IndexMut<(usize, usize)> for ScalarField {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        let k = self.grid.index(i, j);
        &mut self.data[k]
    }
}

/// Two-component cell-centred vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub c1: ScalarField,
    pub c2: ScalarField,
}

impl VectorField {
    pub fn new(c1: ScalarField, c2: ScalarField) -> Result<Self> {
        if c1.grid != c2.grid {
            return Err(SolverError::InvalidGrid(
                "vector components live on different grids".into(),
            ));
        }
        Ok(Self { c1, c2 })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            c1: ScalarField::zeros(grid),
            c2: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.c1.grid()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        self.c1.zip_map(&self.c2, f64::hypot)
    }

    pub fn max_abs(&self) -> f64 {
        self.c1.max_abs().max(self.c2.max_abs())
    }
}

/// Central difference along the first axis: `(f(i+1) - f(i-1)) / (2 dx1)`.
pub fn d1_h(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let inv = 0.5 / g.dx1;
    let mut out = ScalarField::zeros(g);
    for (i, j) in g.cells() {
        out[(i, j)] = (f.at_offset(i, j, 1, 0) - f.at_offset(i, j, -1, 0)) * inv;
    }
    out
}

/// Central difference along the second (vertical) axis.
pub fn d2_h(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let inv = 0.5 / g.dx2;
    let mut out = ScalarField::zeros(g);
    for (i, j) in g.cells() {
        out[(i, j)] = (f.at_offset(i, j, 0, 1) - f.at_offset(i, j, 0, -1)) * inv;
    }
    out
}

pub fn central_gradient(f: &ScalarField) -> VectorField {
    VectorField {
        c1: d1_h(f),
        c2: d2_h(f),
    }
}

pub fn central_divergence(v: &VectorField) -> ScalarField {
    let g = *v.grid();
    let inv1 = 0.5 / g.dx1;
    let inv2 = 0.5 / g.dx2;
    let mut out = ScalarField::zeros(g);
    for (i, j) in g.cells() {
        out[(i, j)] = (v.c1.at_offset(i, j, 1, 0) - v.c1.at_offset(i, j, -1, 0)) * inv1
            + (v.c2.at_offset(i, j, 0, 1) - v.c2.at_offset(i, j, 0, -1)) * inv2;
    }
    out
}

/// Wide Laplacian, `central_divergence(central_gradient(f))`.
pub fn laplacian_h(f: &ScalarField) -> ScalarField {
    central_divergence(&central_gradient(f))
}
