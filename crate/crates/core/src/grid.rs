use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic box `[0, L)^d` sampled with `N` points per axis.
///
/// Flat indices are row-major with x fastest: `i = ix + N*(iy + N*iz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::config("dimension", format!("must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config("n", format!("must be a power of two >= 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::config("length", format!("must be positive, got {length}")));
        }
        Ok(Grid { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of grid points, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Signed mode number `n_j ∈ {-N/2, ..., N/2-1}` of FFT index `i`.
    pub fn mode_number(&self, i: usize) -> i64 {
        let h = self.n / 2;
        if i < h {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber `2π n_j / L` for FFT index `i`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * PI * self.mode_number(i) as f64 / self.length
    }

    /// Wavenumber used by odd-order derivatives: the Nyquist entry is zero.
    pub fn derivative_wavenumber(&self, i: usize) -> f64 {
        if i == self.n / 2 {
            0.0
        } else {
            self.wavenumber(i)
        }
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Smallest nonzero wavenumber, `2π / L`.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest wavenumber retained by the 2/3 dealiasing rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.fundamental() * (self.n / 3) as f64
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        match self.dim {
            2 => c[0] + self.n * c[1],
            _ => c[0] + self.n * (c[1] + self.n * c[2]),
        }
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [idx % n, idx / n, 0],
            _ => [idx % n, (idx / n) % n, idx / (n * n)],
        }
    }

    /// Flat index of the mode `-k` given the flat index of `k`.
    pub fn negated_index(&self, idx: usize) -> usize {
        let c = self.coords(idx);
        let neg = |v: usize| (self.n - v) % self.n;
        self.index([neg(c[0]), neg(c[1]), neg(c[2])])
    }

    /// Physical coordinates of a grid point (`x_j = i_j L / N`).
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c[a] as f64 * h;
        }
        x
    }

    /// Center of the box.
    pub fn center(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for v in c.iter_mut().take(self.dim) {
            *v = 0.5 * self.length;
        }
        c
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "expected (d={}, N={}, L={}), got (d={}, N={}, L={})",
                self.dim, self.n, self.length, other.dim, other.n, other.length
            )));
        }
        Ok(())
    }
}
