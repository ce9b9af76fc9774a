//! Real scalar and vector fields on a [`Grid`], and their Fourier coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Real field sampled at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::config(
                "field",
                format!("expected {} values for grid, got {}", grid.len(), values.len()),
            ));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        ScalarField {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f` at every grid point; the closure receives physical coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        debug_assert_eq!(self.grid, other.grid);
        ScalarField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        self.map(|v| c * v)
    }

    /// Sequential sum; the fixed order keeps reductions reproducible.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.values.len() as f64
    }

    /// Periodic trapezoid rule: mean times box volume.
    pub fn integral(&self) -> f64 {
        self.sum() * self.grid.cell_volume()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Discrete `L²` norm over the whole box.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        grid.check_same(&self.grid)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                self.zip_map(rhs, |a, b| a $op b)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scale(rhs)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

/// `d` real components on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(comps: Vec<ScalarField>) -> Result<Self> {
        let first = comps
            .first()
            .ok_or_else(|| Error::config("field", "vector field needs components"))?;
        let grid = *first.grid();
        if comps.len() != grid.dim() {
            return Err(Error::config(
                "field",
                format!("expected {} components, got {}", grid.dim(), comps.len()),
            ));
        }
        for c in &comps {
            c.check_grid(&grid)?;
        }
        Ok(VectorField { grid, comps })
    }

    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            grid,
            comps: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn constant(grid: Grid, c: &[f64]) -> Self {
        VectorField {
            grid,
            comps: (0..grid.dim()).map(|a| ScalarField::constant(grid, c[a])).collect(),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut comps: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); grid.dim()];
        for i in 0..grid.len() {
            let v = f(grid.position(i));
            for (a, c) in comps.iter_mut().enumerate() {
                c.push(v[a]);
            }
        }
        VectorField {
            grid,
            comps: comps
                .into_iter()
                .map(|values| ScalarField { grid, values })
                .collect(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn comps_mut(&mut self) -> &mut [ScalarField] {
        &mut self.comps
    }

    pub fn comp(&self, a: usize) -> &ScalarField {
        &self.comps[a]
    }

    pub fn into_comps(self) -> Vec<ScalarField> {
        self.comps
    }

    pub fn map_comps(&self, f: impl Fn(&ScalarField) -> ScalarField) -> VectorField {
        VectorField {
            grid: self.grid,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn zip_comps(
        &self,
        other: &VectorField,
        f: impl Fn(&ScalarField, &ScalarField) -> ScalarField,
    ) -> VectorField {
        VectorField {
            grid: self.grid,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> VectorField {
        self.map_comps(|f| f.scale(c))
    }

    /// Componentwise product with a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField) -> VectorField {
        self.map_comps(|f| f * s)
    }

    /// Pointwise dot product.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        let mut out = ScalarField::zeros(self.grid);
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for ((o, x), y) in out.values.iter_mut().zip(&a.values).zip(&b.values) {
                *o += x * y;
            }
        }
        out
    }

    /// Pointwise squared Euclidean magnitude.
    pub fn norm_sq(&self) -> ScalarField {
        self.dot(self)
    }

    pub fn means(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.mean()).collect()
    }

    /// `L²` norm of the pointwise magnitude.
    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().integral().sqrt()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.norm_sq().max().sqrt()
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.zip_comps(rhs, |a, b| a + b)
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.zip_comps(rhs, |a, b| a - b)
    }
}

/// Unnormalized discrete Fourier coefficients of a real field.
///
/// Forward transform: `c(k) = Σ_x f(x) e^{-i k·x}`; the inverse carries the `1/N^d`.
/// Coefficients of a real field satisfy `c(-k) = conj(c(k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::config(
                "spectrum",
                format!("expected {} coefficients, got {}", grid.len(), coeffs.len()),
            ));
        }
        Ok(Spectrum { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        Spectrum {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Multiplies every coefficient by `f(flat_index)`.
    pub fn apply(&mut self, f: impl Fn(usize) -> Complex64) {
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            *c *= f(i);
        }
    }

    pub fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| f(i, c)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Spectrum {
        self.map_indexed(|_, c| c * s)
    }

    pub fn add(&self, other: &Spectrum) -> Spectrum {
        self.map_indexed(|i, c| c + other.coeffs[i])
    }

    pub fn sub(&self, other: &Spectrum) -> Spectrum {
        self.map_indexed(|i, c| c - other.coeffs[i])
    }

    /// Mean value of the represented field.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.grid.len() as f64
    }

    /// Replaces each coefficient by the average of itself and `conj(c(-k))`.
    pub fn enforce_hermitian(&mut self) {
        let g = self.grid;
        for i in 0..g.len() {
            let j = g.negated_index(i);
            if j < i {
                continue;
            }
            if j == i {
                self.coeffs[i].im = 0.0;
                continue;
            }
            let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
    }

    /// Largest violation of `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        let g = self.grid;
        (0..g.len())
            .map(|i| (self.coeffs[i] - self.coeffs[g.negated_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ |c(k)|² / N^d`, which equals `Σ_x |f(x)|²` by Parseval.
    pub fn energy_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.grid.len() as f64
    }
}
