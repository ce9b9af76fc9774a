//! Fourier-side calculus on periodic grids: transforms, derivatives,
//! Helmholtz projectors, Bessel-potential filters and 2/3-rule dealiasing.

mod fft;

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::Result;
use crate::field::{ScalarField, Spectrum, VectorField};
use crate::grid::Grid;
use fft::FftNd;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Precomputed wavenumber tables and FFT plans for one grid.
///
/// Cheap to clone (tables are shared).
#[derive(Clone)]
pub struct Spectral {
    grid: Grid,
    fft: Arc<FftNd>,
    tables: Arc<Tables>,
}

struct Tables {
    /// Odd-derivative wavenumbers per axis and flat index (Nyquist zeroed).
    kd: Vec<Vec<f64>>,
    /// Full `|k|²` per flat index (Nyquist kept).
    k2: Vec<f64>,
    /// `|k_d|²` built from the odd-derivative wavenumbers.
    kd2: Vec<f64>,
    /// 2/3-rule mask.
    keep: Vec<bool>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let len = grid.len();
        let d = grid.dim();
        let n = grid.n();
        let mut kd = vec![vec![0.0; len]; d];
        let mut k2 = vec![0.0; len];
        let mut kd2 = vec![0.0; len];
        let mut keep = vec![true; len];
        let third = (n / 3) as i64;
        for idx in 0..len {
            let c = grid.coords(idx);
            for a in 0..d {
                let k = grid.wavenumber(c[a]);
                let kdv = grid.derivative_wavenumber(c[a]);
                kd[a][idx] = kdv;
                k2[idx] += k * k;
                kd2[idx] += kdv * kdv;
                if grid.mode_number(c[a]).abs() > third {
                    keep[idx] = false;
                }
            }
        }
        Spectral {
            grid,
            fft: Arc::new(FftNd::new(n, d)),
            tables: Arc::new(Tables { kd, k2, kd2, keep }),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Odd-derivative wavenumber table for `axis`.
    pub fn k(&self, axis: usize) -> &[f64] {
        &self.tables.kd[axis]
    }

    /// `|k|²` table.
    pub fn k2(&self) -> &[f64] {
        &self.tables.k2
    }

    /// `|k|²` with Nyquist components removed, the symbol of `-div grad`.
    pub fn kd2(&self) -> &[f64] {
        &self.tables.kd2
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.tables.keep
    }

    // ----- transforms -------------------------------------------------------

    pub fn forward(&self, f: &ScalarField) -> Spectrum {
        debug_assert_eq!(f.grid(), &self.grid);
        let mut data: Vec<Complex64> =
            f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.process(&mut data, false);
        let mut s = Spectrum::new(self.grid, data).expect("sized by grid");
        s.enforce_hermitian();
        s
    }

    /// Checked forward transform for fields that may come from another grid.
    pub fn try_forward(&self, f: &ScalarField) -> Result<Spectrum> {
        f.check_grid(&self.grid)?;
        Ok(self.forward(f))
    }

    pub fn inverse(&self, s: &Spectrum) -> ScalarField {
        debug_assert_eq!(s.grid(), &self.grid);
        let mut data = s.coeffs().to_vec();
        self.fft.process(&mut data, true);
        let norm = 1.0 / self.grid.len() as f64;
        ScalarField::new(self.grid, data.into_iter().map(|c| c.re * norm).collect())
            .expect("sized by grid")
    }

    pub fn forward_vec(&self, v: &VectorField) -> Vec<Spectrum> {
        v.comps().iter().map(|c| self.forward(c)).collect()
    }

    pub fn inverse_vec(&self, s: &[Spectrum]) -> VectorField {
        VectorField::new(s.iter().map(|c| self.inverse(c)).collect()).expect("same grid")
    }

    // ----- spectral-side operators -----------------------------------------

    pub fn d_spec(&self, s: &Spectrum, axis: usize) -> Spectrum {
        let k = self.k(axis);
        s.map_indexed(|i, c| I * k[i] * c)
    }

    pub fn grad_spec(&self, s: &Spectrum) -> Vec<Spectrum> {
        (0..self.grid.dim()).map(|a| self.d_spec(s, a)).collect()
    }

    pub fn div_spec(&self, v: &[Spectrum]) -> Spectrum {
        let mut out = Spectrum::zeros(self.grid);
        for (a, comp) in v.iter().enumerate() {
            let k = self.k(a);
            for (i, (o, c)) in out.coeffs_mut().iter_mut().zip(comp.coeffs()).enumerate() {
                *o += I * k[i] * c;
            }
        }
        out
    }

    pub fn lap_spec(&self, s: &Spectrum) -> Spectrum {
        let k2 = self.k2();
        s.map_indexed(|i, c| -k2[i] * c)
    }

    /// Inverse Laplacian; the mean mode is set to zero.
    pub fn inv_lap_spec(&self, s: &Spectrum) -> Spectrum {
        let k2 = self.k2();
        s.map_indexed(|i, c| if k2[i] > 0.0 { -c / k2[i] } else { Complex64::new(0.0, 0.0) })
    }

    /// Multiplies by `m(|k|)` evaluated on the full `|k|`.
    pub fn radial_multiplier(&self, s: &Spectrum, m: impl Fn(f64) -> f64) -> Spectrum {
        let k2 = self.k2();
        s.map_indexed(|i, c| c * m(k2[i].sqrt()))
    }

    /// Gradient part `Q v = ∇Δ⁻¹ div v`, built on the odd-derivative wavenumbers so
    /// that `div (v - Q v)` vanishes identically. The mean mode goes to `P`.
    pub fn q_spec(&self, v: &[Spectrum]) -> Vec<Spectrum> {
        let d = self.grid.dim();
        let kd2 = self.kd2();
        let len = self.grid.len();
        let mut out: Vec<Spectrum> = (0..d).map(|_| Spectrum::zeros(self.grid)).collect();
        for i in 0..len {
            if kd2[i] == 0.0 {
                continue;
            }
            let mut kv = Complex64::new(0.0, 0.0);
            for (a, comp) in v.iter().enumerate() {
                kv += self.k(a)[i] * comp.coeffs()[i];
            }
            let w = kv / kd2[i];
            for (a, o) in out.iter_mut().enumerate() {
                o.coeffs_mut()[i] = self.k(a)[i] * w;
            }
        }
        out
    }

    pub fn p_spec(&self, v: &[Spectrum]) -> Vec<Spectrum> {
        let q = self.q_spec(v);
        v.iter().zip(&q).map(|(a, b)| a.sub(b)).collect()
    }

    /// Zeroes every mode with some `|n_j| > N/3`.
    pub fn dealias_spec(&self, s: &mut Spectrum) {
        let keep = self.dealias_mask();
        for (c, &k) in s.coeffs_mut().iter_mut().zip(keep) {
            if !k {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn bessel_spec(&self, s: &Spectrum, order: f64) -> Spectrum {
        if order == 0.0 {
            return s.clone();
        }
        let k2 = self.k2();
        s.map_indexed(|i, c| c * (1.0 + k2[i]).powf(0.5 * order))
    }

    // ----- physical-side convenience wrappers --------------------------------

    pub fn gradient(&self, f: &ScalarField) -> VectorField {
        let s = self.forward(f);
        self.inverse_vec(&self.grad_spec(&s))
    }

    pub fn divergence(&self, v: &VectorField) -> ScalarField {
        let s = self.forward_vec(v);
        self.inverse(&self.div_spec(&s))
    }

    pub fn laplacian(&self, f: &ScalarField) -> ScalarField {
        self.inverse(&self.lap_spec(&self.forward(f)))
    }

    pub fn bilaplacian(&self, f: &ScalarField) -> ScalarField {
        let k2 = self.k2();
        let s = self.forward(f).map_indexed(|i, c| k2[i] * k2[i] * c);
        self.inverse(&s)
    }

    pub fn helmholtz_q(&self, v: &VectorField) -> VectorField {
        self.inverse_vec(&self.q_spec(&self.forward_vec(v)))
    }

    pub fn helmholtz_p(&self, v: &VectorField) -> VectorField {
        self.inverse_vec(&self.p_spec(&self.forward_vec(v)))
    }

    /// Bessel potential `(1 + |k|²)^{s/2}` applied to `f`.
    pub fn bessel_filter(&self, f: &ScalarField, order: f64) -> ScalarField {
        if order == 0.0 {
            return f.clone();
        }
        self.inverse(&self.bessel_spec(&self.forward(f), order))
    }

    pub fn dealias(&self, f: &ScalarField) -> ScalarField {
        let mut s = self.forward(f);
        self.dealias_spec(&mut s);
        self.inverse(&s)
    }

    /// Pointwise product, dealiased.
    pub fn product(&self, a: &ScalarField, b: &ScalarField) -> ScalarField {
        self.dealias(&(a * b))
    }

    /// Spectral curl-free check helper: `‖P v‖ / ‖v‖` (0 for a zero field).
    pub fn solenoidal_fraction(&self, v: &[Spectrum]) -> f64 {
        let p = self.p_spec(v);
        let num: f64 = p.iter().map(|s| s.energy_sum()).sum();
        let den: f64 = v.iter().map(|s| s.energy_sum()).sum();
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }
}
