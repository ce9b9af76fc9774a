//! Exact Fourier-multiplier solver for the linear capillary acoustic system
//!
//! ```text
//! ∂_t s + ε⁻¹ div ∇Φ = 0
//! ∂_t ∇Φ + γ ε⁻¹ ∇(s - 2κ²ε² Δs) = 0
//! ```
//!
//! Each nonzero mode rotates with angular frequency `ω(k) = (|k|/ε) √G(k)`;
//! see [`Coupling`] for `G`.

mod decay;

pub use decay::{strichartz_decay_experiment, DecayExperiment, DecayResult, DecayRow, Horizon};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, Spectrum, VectorField};
use crate::functionals::PhysParams;
use crate::grid::Grid;
use crate::spectral::Spectral;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Placement of `γ` in the momentum equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// `γ` multiplies both the pressure and the capillary term:
    /// `G = γ(1 + 2κ²ε²|k|²)`, so `ω = √γ φ_ε(|k|)`.
    #[default]
    Scaled,
    /// `γ` multiplies only the pressure term, as in the linearization of the
    /// full fluid equations about `(1, 0)`: `G = γ + 2κ²ε²|k|²`.
    Linearized,
}

/// Parameters of the acoustic system. `gamma` may equal 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcousticParams {
    pub eps: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub coupling: Coupling,
}

impl AcousticParams {
    pub fn new(eps: f64, kappa: f64, gamma: f64) -> Result<Self> {
        let p = AcousticParams {
            eps,
            kappa,
            gamma,
            coupling: Coupling::Scaled,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    /// Acoustic system linearized from the fluid parameters: the pressure
    /// coefficient is the squared sound speed of the equation of state.
    pub fn linearized_from(p: &PhysParams) -> Self {
        AcousticParams {
            eps: p.eps,
            kappa: p.kappa,
            gamma: p.eos().sound_speed_sq(),
            coupling: Coupling::Linearized,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::Domain(format!("ε must be positive, got {}", self.eps)));
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::Domain(format!("κ must be nonnegative, got {}", self.kappa)));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::Domain(format!("γ must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    /// `G(k)` evaluated at `|k|² = k2`.
    pub fn g_factor(&self, k2: f64) -> f64 {
        let c = 2.0 * self.kappa * self.kappa * self.eps * self.eps * k2;
        match self.coupling {
            Coupling::Scaled => self.gamma * (1.0 + c),
            Coupling::Linearized => self.gamma + c,
        }
    }

    /// Angular frequency of a mode with wavenumber magnitude `k`.
    pub fn omega(&self, k: f64) -> f64 {
        k / self.eps * self.g_factor(k * k).sqrt()
    }

    /// Group speed `dω/dk`.
    pub fn group_velocity(&self, k: f64) -> f64 {
        let g = self.g_factor(k * k);
        let c = 4.0 * self.kappa * self.kappa * self.eps * self.eps * k;
        let dg = match self.coupling {
            Coupling::Scaled => self.gamma * c,
            Coupling::Linearized => c,
        };
        (g.sqrt() + k * dg / (2.0 * g.sqrt())) / self.eps
    }
}

/// `φ_ε(k) = (k/ε) √(1 + 2ε²κ²k²)`.
pub fn multiplier_phi(k: f64, eps: f64, kappa: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("φ_ε requires ε > 0, got {eps}")));
    }
    Ok(k / eps * (1.0 + 2.0 * eps * eps * kappa * kappa * k * k).sqrt())
}

/// Density fluctuation `s` and irrotational momentum `∇Φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticState {
    pub s: ScalarField,
    pub grad_phi: VectorField,
    pub params: AcousticParams,
}

impl AcousticState {
    pub fn new(s: ScalarField, grad_phi: VectorField, params: AcousticParams) -> Result<Self> {
        s.check_grid(grad_phi.grid())?;
        params.validate()?;
        Ok(AcousticState { s, grad_phi, params })
    }

    pub fn zeros(grid: Grid, params: AcousticParams) -> Self {
        AcousticState {
            s: ScalarField::zeros(grid),
            grad_phi: VectorField::zeros(grid),
            params,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.s.grid()
    }

    /// `‖(s, ∇Φ)‖_{L²}`.
    pub fn l2_norm(&self) -> f64 {
        let a = self.s.l2_norm();
        let b = self.grad_phi.l2_norm();
        (a * a + b * b).sqrt()
    }

    /// Components `(s, ∂₁Φ, …)` in order.
    pub fn components(&self) -> Vec<ScalarField> {
        let mut v = vec![self.s.clone()];
        v.extend(self.grad_phi.comps().iter().cloned());
        v
    }
}

/// Symmetrized variables `σ̃ = √G ŝ` and `m̃ = (-Δ)^{-1/2} div ∇Φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedState {
    pub sigma: ScalarField,
    pub m: ScalarField,
    /// Mean of each `∇Φ` component, which `m̃` cannot represent.
    pub pinned_mean: Vec<f64>,
    pub params: AcousticParams,
}

/// Per-mode data shared by all evolutions on one grid.
#[derive(Debug, Clone)]
struct ModeTable {
    /// `|k_d|`, the magnitude of the odd-derivative wavenumber.
    a: Vec<f64>,
    /// `√G(|k|²)`.
    sqrt_g: Vec<f64>,
    omega: Vec<f64>,
}

impl ModeTable {
    fn new(sp: &Spectral, params: &AcousticParams) -> Self {
        let k2 = sp.k2();
        let kd2 = sp.kd2();
        let a: Vec<f64> = kd2.iter().map(|v| v.sqrt()).collect();
        let sqrt_g: Vec<f64> = k2.iter().map(|&v| params.g_factor(v).sqrt()).collect();
        let omega = a
            .iter()
            .zip(&sqrt_g)
            .map(|(a, g)| a * g / params.eps)
            .collect();
        ModeTable { a, sqrt_g, omega }
    }
}

/// Propagator started from a fixed initial state.
///
/// The initial data are transformed once; [`AcousticEvolver::at`] then costs
/// one multiplier pass and `1 + d` inverse transforms.
#[derive(Clone)]
pub struct AcousticEvolver {
    sp: Spectral,
    params: AcousticParams,
    modes: ModeTable,
    s0: Spectrum,
    /// Longitudinal momentum amplitude `k̂·m̂`.
    ml0: Vec<Complex64>,
    /// Part of `m̂` orthogonal to `k` (and the mean); never moves.
    frozen: Vec<Spectrum>,
}

impl AcousticEvolver {
    pub fn new(sp: &Spectral, state: &AcousticState) -> Result<Self> {
        state.s.check_grid(sp.grid())?;
        state.grad_phi.grid().check_same(sp.grid())?;
        let s0 = sp.forward(&state.s);
        let m0 = sp.forward_vec(&state.grad_phi);
        Ok(Self::from_spectra(sp, state.params, s0, m0))
    }

    pub fn from_spectra(sp: &Spectral, params: AcousticParams, s0: Spectrum, m0: Vec<Spectrum>) -> Self {
        let modes = ModeTable::new(sp, &params);
        let d = sp.grid().dim();
        let len = sp.grid().len();
        let mut ml0 = vec![ZERO; len];
        let mut frozen = m0;
        for (i, ml) in ml0.iter_mut().enumerate() {
            let a = modes.a[i];
            if a == 0.0 {
                continue;
            }
            let mut acc = ZERO;
            for (ax, f) in frozen.iter().enumerate().take(d) {
                acc += sp.k(ax)[i] / a * f.coeffs()[i];
            }
            *ml = acc;
            for (ax, f) in frozen.iter_mut().enumerate() {
                f.coeffs_mut()[i] -= sp.k(ax)[i] / a * acc;
            }
        }
        AcousticEvolver {
            sp: sp.clone(),
            params,
            modes,
            s0,
            ml0,
            frozen,
        }
    }

    pub fn params(&self) -> &AcousticParams {
        &self.params
    }

    pub fn spectral(&self) -> &Spectral {
        &self.sp
    }

    /// Spectra of `s` and `∇Φ` at time `t`.
    pub fn spectra_at(&self, t: f64) -> (Spectrum, Vec<Spectrum>) {
        let eps = self.params.eps;
        let len = self.sp.grid().len();
        let mut s = self.s0.clone();
        let mut m = self.frozen.clone();
        for i in 0..len {
            let a = self.modes.a[i];
            if a == 0.0 {
                continue;
            }
            let w = self.modes.omega[i];
            let g = self.modes.sqrt_g[i] * self.modes.sqrt_g[i];
            let (sn, cs) = (w * t).sin_cos();
            let s0 = self.s0.coeffs()[i];
            let ml0 = self.ml0[i];
            s.coeffs_mut()[i] = cs * s0 - I * (a / (eps * w)) * sn * ml0;
            let ml = cs * ml0 - I * (a * g / (eps * w)) * sn * s0;
            for (ax, f) in m.iter_mut().enumerate() {
                f.coeffs_mut()[i] += self.sp.k(ax)[i] / a * ml;
            }
        }
        (s, m)
    }

    /// Time derivatives `(∂_t s, ∂_t ∇Φ)` at time `t`, from the equations.
    pub fn derivatives_at(&self, t: f64) -> (Spectrum, Vec<Spectrum>) {
        let (s, m) = self.spectra_at(t);
        rhs(&self.sp, &self.params, &s, &m)
    }

    pub fn at(&self, t: f64) -> AcousticState {
        let (s, m) = self.spectra_at(t);
        AcousticState {
            s: self.sp.inverse(&s),
            grad_phi: self.sp.inverse_vec(&m),
            params: self.params,
        }
    }

    /// Symmetrized `H^order` norm at time `t`, computed on the Fourier side.
    pub fn symmetrized_norm_at(&self, t: f64, order: f64) -> f64 {
        let (s, m) = self.spectra_at(t);
        symmetrized_norm_spectral(&self.sp, &self.params, &s, &m, order)
    }
}

/// Right-hand side of the acoustic system on the Fourier side.
pub fn rhs(
    sp: &Spectral,
    params: &AcousticParams,
    s: &Spectrum,
    m: &[Spectrum],
) -> (Spectrum, Vec<Spectrum>) {
    let eps = params.eps;
    let k2 = sp.k2();
    let ds = sp.div_spec(m).scale(-1.0 / eps);
    let q = s.map_indexed(|i, c| c * params.g_factor(k2[i]) / eps);
    let dm = sp.grad_spec(&q).into_iter().map(|f| f.scale(-1.0)).collect();
    (ds, dm)
}

/// Exact solution operator applied to `state` over time `t` (any sign).
pub fn propagate(sp: &Spectral, state: &AcousticState, t: f64) -> Result<AcousticState> {
    if t == 0.0 {
        return Ok(state.clone());
    }
    Ok(AcousticEvolver::new(sp, state)?.at(t))
}

fn symmetrized_parts(
    sp: &Spectral,
    params: &AcousticParams,
    s: &Spectrum,
    m: &[Spectrum],
) -> (Spectrum, Spectrum) {
    let modes = ModeTable::new(sp, params);
    let sigma = s.map_indexed(|i, c| c * modes.sqrt_g[i]);
    let mut mt = Spectrum::zeros(*sp.grid());
    for (i, c) in mt.coeffs_mut().iter_mut().enumerate() {
        let a = modes.a[i];
        if a == 0.0 {
            continue;
        }
        let mut acc = ZERO;
        for (ax, f) in m.iter().enumerate() {
            acc += sp.k(ax)[i] * f.coeffs()[i];
        }
        *c = I * acc / a;
    }
    (sigma, mt)
}

/// `‖(σ̃, m̃)‖_{H^order}` from spectra of `s` and `∇Φ`.
pub fn symmetrized_norm_spectral(
    sp: &Spectral,
    params: &AcousticParams,
    s: &Spectrum,
    m: &[Spectrum],
    order: f64,
) -> f64 {
    let (sigma, mt) = symmetrized_parts(sp, params, s, m);
    let k2 = sp.k2();
    let mut acc = 0.0;
    for i in 0..k2.len() {
        let w = if order == 0.0 { 1.0 } else { (1.0 + k2[i]).powf(order) };
        acc += w * (sigma.coeffs()[i].norm_sqr() + mt.coeffs()[i].norm_sqr());
    }
    let grid = sp.grid();
    (acc / grid.len() as f64 * grid.cell_volume()).sqrt()
}

pub fn symmetrize(sp: &Spectral, state: &AcousticState) -> Result<SymmetrizedState> {
    state.s.check_grid(sp.grid())?;
    let s = sp.forward(&state.s);
    let m = sp.forward_vec(&state.grad_phi);
    let (sigma, mt) = symmetrized_parts(sp, &state.params, &s, &m);
    Ok(SymmetrizedState {
        sigma: sp.inverse(&sigma),
        m: sp.inverse(&mt),
        pinned_mean: state.grad_phi.means(),
        params: state.params,
    })
}

/// Inverse of [`symmetrize`] on curl-free momenta.
pub fn desymmetrize(sp: &Spectral, sym: &SymmetrizedState) -> Result<AcousticState> {
    sym.sigma.check_grid(sp.grid())?;
    let modes = ModeTable::new(sp, &sym.params);
    let sigma = sp.forward(&sym.sigma);
    let mt = sp.forward(&sym.m);
    let s = sigma.map_indexed(|i, c| c / modes.sqrt_g[i]);
    let d = sp.grid().dim();
    let n = sp.grid().len() as f64;
    let m: Vec<Spectrum> = (0..d)
        .map(|ax| {
            let k = sp.k(ax);
            let mut f = mt.map_indexed(|i, c| {
                let a = modes.a[i];
                if a == 0.0 {
                    ZERO
                } else {
                    -I * c * k[i] / a
                }
            });
            f.coeffs_mut()[0] = Complex64::new(sym.pinned_mean.get(ax).copied().unwrap_or(0.0) * n, 0.0);
            f
        })
        .collect();
    Ok(AcousticState {
        s: sp.inverse(&s),
        grad_phi: sp.inverse_vec(&m),
        params: sym.params,
    })
}

/// Relative residual of `∂²_t s + ε⁻² (-Δ) G s = 0`, with `∂²_t s` taken by a
/// central difference of the exact flow at `t - Δt`, `t`, `t + Δt`.
///
/// For `γ = 1` and the default coupling the spatial operator is
/// `ε⁻² Δ(1 - 2ε²κ²Δ)`.
pub fn dispersion_residual(sp: &Spectral, state: &AcousticState, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("Δt must be positive, got {dt}")));
    }
    let ev = AcousticEvolver::new(sp, state)?;
    let (sm, _) = ev.spectra_at(t - dt);
    let (s0, _) = ev.spectra_at(t);
    let (sp1, _) = ev.spectra_at(t + dt);
    let eps = state.params.eps;
    let kd2 = sp.kd2();
    let k2 = sp.k2();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..kd2.len() {
        let op = kd2[i] * state.params.g_factor(k2[i]) / (eps * eps) * s0.coeffs()[i];
        let tt = (sp1.coeffs()[i] - 2.0 * s0.coeffs()[i] + sm.coeffs()[i]) / (dt * dt);
        num += (tt + op).norm_sqr();
        den += op.norm_sqr();
    }
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok((num / den).sqrt())
}
