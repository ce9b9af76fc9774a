use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, Spectrum};
use crate::functionals::PhysParams;
use crate::spectral::Spectral;
use crate::state::FluidState;

use super::physics::{tendency_spec, Part};

/// Step-size and safety settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub cfl: f64,
    pub rho_min: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        StepConfig {
            cfl: 0.4,
            rho_min: 0.05,
        }
    }
}

/// Exact flow of the linear part over a fixed time shift, stored per mode.
struct Rotation {
    cos: Vec<f64>,
    /// `(a/ω) sin ωτ`.
    s_rho: Vec<f64>,
    /// `(aΛ/ω) sin ωτ`.
    s_m: Vec<f64>,
}

/// Per-mode data of the linear operator `ϱ' ↦ -div m`, `m ↦ -Λ∇ϱ'` with
/// `Λ = c²/ε² + 2κ²|k|²`.
struct LinearOperator {
    a: Vec<f64>,
    lambda: Vec<f64>,
}

impl LinearOperator {
    fn new(sp: &Spectral, params: &PhysParams) -> Self {
        let c2 = params.eos().sound_speed_sq();
        let inv_e2 = 1.0 / (params.eps * params.eps);
        let kk = 2.0 * params.kappa * params.kappa;
        LinearOperator {
            a: sp.kd2().iter().map(|v| v.sqrt()).collect(),
            lambda: sp.k2().iter().map(|k2| c2 * inv_e2 + kk * k2).collect(),
        }
    }

    fn rotation(&self, tau: f64) -> Rotation {
        let n = self.a.len();
        let mut r = Rotation {
            cos: vec![1.0; n],
            s_rho: vec![0.0; n],
            s_m: vec![0.0; n],
        };
        for i in 0..n {
            let a = self.a[i];
            if a == 0.0 {
                continue;
            }
            let omega = a * self.lambda[i].sqrt();
            let (s, c) = (omega * tau).sin_cos();
            r.cos[i] = c;
            r.s_rho[i] = a / omega * s;
            r.s_m[i] = a * self.lambda[i] / omega * s;
        }
        r
    }

    /// Largest linear frequency on the grid.
    fn max_frequency(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.lambda)
            .map(|(a, l)| a * l.sqrt())
            .fold(0.0, f64::max)
    }
}

/// Prognostic variables `(ϱ̂, m̂)` on the Fourier side.
#[derive(Clone)]
struct Prognostic {
    rho: Spectrum,
    m: Vec<Spectrum>,
}

impl Prognostic {
    fn axpy(&self, c: f64, rhs: &[Spectrum]) -> Prognostic {
        Prognostic {
            rho: self.rho.clone(),
            m: self.m.iter().zip(rhs).map(|(m, r)| m.add(&r.scale(c))).collect(),
        }
    }

    fn combine(&self, wa: f64, other: &Prognostic, wb: f64) -> Prognostic {
        Prognostic {
            rho: self.rho.scale(wa).add(&other.rho.scale(wb)),
            m: self
                .m
                .iter()
                .zip(&other.m)
                .map(|(a, b)| a.scale(wa).add(&b.scale(wb)))
                .collect(),
        }
    }
}

fn rotate(sp: &Spectral, rot: &Rotation, x: &Prognostic) -> Prognostic {
    let d = x.m.len();
    let mut rho = x.rho.clone();
    let mut m = x.m.clone();
    let i_unit = Complex64::new(0.0, 1.0);
    let ks: Vec<&[f64]> = (0..d).map(|a| sp.k(a)).collect();
    let kd2 = sp.kd2();
    for i in 0..rho.coeffs().len() {
        if kd2[i] == 0.0 {
            continue;
        }
        let a = kd2[i].sqrt();
        let mut ml = Complex64::new(0.0, 0.0);
        for (c, k) in x.m.iter().zip(&ks) {
            ml += k[i] / a * c.coeffs()[i];
        }
        let r0 = x.rho.coeffs()[i];
        let r1 = rot.cos[i] * r0 - i_unit * rot.s_rho[i] * ml;
        let ml1 = rot.cos[i] * ml - i_unit * rot.s_m[i] * r0;
        rho.coeffs_mut()[i] = r1;
        let dm = ml1 - ml;
        for (c, k) in m.iter_mut().zip(&ks) {
            c.coeffs_mut()[i] += k[i] / a * dm;
        }
    }
    Prognostic { rho, m }
}

/// Integrating-factor SSP-RK3 integrator for the capillary Navier–Stokes system.
///
/// The constant-coefficient acoustic and capillary operator around `(1, 0)` is
/// propagated exactly mode by mode; convection, viscosity and the nonlinear
/// corrections of pressure and capillarity enter through the three explicit
/// stages. The zero mode of `ϱ̂` is never touched, so the mass is conserved to
/// round-off.
pub struct NskSolver {
    sp: Spectral,
    params: PhysParams,
    cfg: StepConfig,
    linear: LinearOperator,
    x: Prognostic,
    t: f64,
    dissipation: f64,
    cached: Option<(f64, [Rotation; 3])>,
}

impl NskSolver {
    pub fn new(sp: &Spectral, state: &FluidState, cfg: StepConfig) -> Result<Self> {
        state.params.validate()?;
        state.rho.check_grid(sp.grid())?;
        if !(cfg.cfl > 0.0) || !(cfg.rho_min > 0.0) {
            return Err(Error::config("cfl", "cfl and rho_min must be positive"));
        }
        let x = Prognostic {
            rho: sp.forward(&state.rho),
            m: sp.forward_vec(&state.momentum()),
        };
        let solver = NskSolver {
            sp: sp.clone(),
            params: state.params,
            cfg,
            linear: LinearOperator::new(sp, &state.params),
            x,
            t: state.t,
            dissipation: 0.0,
            cached: None,
        };
        solver.check_floor(&state.rho)?;
        Ok(solver)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// `2ν ∫₀ᵗ ∫ ϱ|Du|²` accumulated with the same stages as the state.
    pub fn dissipation(&self) -> f64 {
        self.dissipation
    }

    /// Largest frequency of the exactly propagated linear part.
    pub fn linear_max_frequency(&self) -> f64 {
        self.linear.max_frequency()
    }

    pub fn state(&self) -> Result<FluidState> {
        let rho = self.sp.inverse(&self.x.rho);
        let m = self.sp.inverse_vec(&self.x.m);
        FluidState::from_momentum(rho, &m, self.params, self.t)
    }

    fn check_floor(&self, rho: &ScalarField) -> Result<()> {
        let min = rho.min();
        if !(min >= self.cfg.rho_min) {
            let pos = rho.grid().position(rho.argmin());
            return Err(Error::NumericalAbort(format!(
                "density {min:.6e} below floor {} at t = {:.6e}, x = {:?}",
                self.cfg.rho_min, self.t, &pos[..rho.grid().dim()]
            )));
        }
        Ok(())
    }

    /// Explicit rate: advection, viscosity and the residual acoustic/capillary
    /// frequency at the extreme densities.
    pub fn explicit_rate(&self, state: &FluidState) -> f64 {
        explicit_rate(&self.sp, state)
    }

    /// Largest step allowed by the CFL condition for the current state.
    pub fn max_stable_dt(&self) -> Result<f64> {
        let st = self.state()?;
        let rate = explicit_rate(&self.sp, &st);
        Ok(if rate > 0.0 { self.cfg.cfl / rate } else { f64::INFINITY })
    }

    fn remainder(&self, x: &Prognostic) -> Result<(Vec<Spectrum>, f64)> {
        let rho = self.sp.inverse(&x.rho);
        self.check_floor(&rho)?;
        let m = self.sp.inverse_vec(&x.m);
        let u = m.map_comps(|c| c.zip_map(&rho, |a, r| a / r));
        tendency_spec(&self.sp, &rho, &u, &self.params, Part::Remainder)
    }

    /// Advances by `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::config("dt", format!("must be positive, got {dt}")));
        }
        let st = self.state()?;
        let rate = explicit_rate(&self.sp, &st);
        if dt * rate > self.cfg.cfl {
            return Err(Error::NumericalAbort(format!(
                "CFL violated at t = {:.6e}: dt = {dt:.3e} exceeds {:.3e}",
                self.t,
                self.cfg.cfl / rate
            )));
        }
        if self.cached.as_ref().map(|c| c.0) != Some(dt) {
            let rots = [
                self.linear.rotation(dt),
                self.linear.rotation(0.5 * dt),
                self.linear.rotation(-0.5 * dt),
            ];
            self.cached = Some((dt, rots));
        }
        let (_, [full, half, back]) = self.cached.as_ref().expect("rotations cached");
        let sp = &self.sp;
        let x0 = &self.x;

        let (n0, d0) = self.remainder(x0)?;
        let x1 = rotate(sp, full, &x0.axpy(dt, &n0));
        let q1 = self.dissipation + dt * d0;

        let (n1, d1) = self.remainder(&x1)?;
        let x2 = rotate(sp, half, x0).combine(0.75, &rotate(sp, back, &x1.axpy(dt, &n1)), 0.25);
        let q2 = 0.75 * self.dissipation + 0.25 * (q1 + dt * d1);

        let (n2, d2) = self.remainder(&x2)?;
        let x3 = rotate(sp, full, x0).combine(1.0 / 3.0, &rotate(sp, half, &x2.axpy(dt, &n2)), 2.0 / 3.0);
        let q3 = self.dissipation / 3.0 + 2.0 / 3.0 * (q2 + dt * d2);

        let mut x3 = x3;
        x3.rho.coeffs_mut()[0] = x0.rho.coeffs()[0];
        self.check_floor(&sp.inverse(&x3.rho))?;
        self.x = x3;
        self.dissipation = q3;
        self.t += dt;
        Ok(())
    }
}

/// CFL rate `k_max max|u| + 2ν k_max² max ϱ / min ϱ + max residual frequency`.
pub fn explicit_rate(sp: &Spectral, state: &FluidState) -> f64 {
    let p = &state.params;
    let eos = p.eos();
    let kmax = sp.grid().dealias_cutoff() * (sp.grid().dim() as f64).sqrt();
    let (lo, hi) = (state.rho.min(), state.rho.max());
    let adv = kmax * state.u.max_magnitude();
    let visc = 2.0 * p.nu * kmax * kmax * hi / lo;
    let inv_e2 = 1.0 / (p.eps * p.eps);
    let kk = 2.0 * p.kappa * p.kappa * kmax * kmax;
    let lin = (eos.sound_speed_sq() * inv_e2 + kk).sqrt();
    let resid = [lo, hi]
        .iter()
        .map(|&r| {
            let c2 = r * eos.h_second(r);
            kmax * ((c2 * inv_e2 + kk * r).sqrt() - lin).abs()
        })
        .fold(0.0, f64::max);
    adv + visc + resid
}

/// One step of length `dt` from `state`.
pub fn step(sp: &Spectral, state: &FluidState, dt: f64, cfg: StepConfig) -> Result<FluidState> {
    let mut s = NskSolver::new(sp, state, cfg)?;
    s.step(dt)?;
    s.state()
}
