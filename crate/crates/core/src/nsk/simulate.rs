use crate::error::{Error, Result};
use crate::functionals::{bd_entropy, bd_rates, total_energy};
use crate::spectral::Spectral;
use crate::state::{Diagnostics, FluidState, Trajectory};

use super::integrator::{NskSolver, StepConfig};

/// Run settings for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    /// Fixed step. `None` picks `cfl / rate` from the initial state, rounded so
    /// that the steps land on `t_end`.
    pub dt: Option<f64>,
    /// Snapshot every `stride` steps; the final state is always recorded.
    pub stride: usize,
    pub step: StepConfig,
}

impl SimConfig {
    pub fn new(t_end: f64, stride: usize) -> Self {
        SimConfig {
            t_end,
            dt: None,
            stride,
            step: StepConfig::default(),
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }
}

/// Energy inequality and BD bookkeeping over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAudit {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// `2ν ∫₀^τ ∫ ϱ|Du|²` at the final time.
    pub dissipation: f64,
    /// `E(τ) - E(0) + 2ν ∫∫ ϱ|Du|²` at the final time.
    pub residual: f64,
    /// `max_τ (E(τ) + D(τ) - E(0)) / E(0)` over the snapshots.
    pub max_excess: f64,
    /// `max_τ (B(τ) + ∫₀^τ rates) / B(0)` with the BD rates integrated by the
    /// trapezoidal rule over the snapshots.
    pub bd_constant: f64,
    pub steps: usize,
    pub dt: f64,
}

impl EnergyAudit {
    pub fn relative_residual(&self) -> f64 {
        self.residual.abs() / self.initial_energy.abs().max(f64::MIN_POSITIVE)
    }

    /// Whether `E(τ) + 2ν∫∫ϱ|Du|² ≤ E(0)` holds up to `tol` relative.
    pub fn monotone(&self, tol: f64) -> bool {
        self.max_excess <= tol
    }
}

pub fn diagnostics(sp: &Spectral, state: &FluidState, dissipation: f64) -> Result<Diagnostics> {
    Ok(Diagnostics {
        mass: state.mass(),
        energy: total_energy(sp, state)?,
        bd_entropy: bd_entropy(sp, state)?,
        dissipation,
        min_rho: state.rho.min(),
    })
}

/// Integrates from `initial` to `t_end`, sampling every `stride` steps.
/// Fraction of the initial stable step used when no step is given; the run
/// keeps that step, so the margin absorbs later growth of the CFL rate.
pub const AUTO_DT_FRACTION: f64 = 0.8;

pub fn simulate(
    sp: &Spectral,
    initial: &FluidState,
    cfg: &SimConfig,
) -> Result<(Trajectory, EnergyAudit)> {
    if !(cfg.t_end > initial.t) {
        return Err(Error::config("t_end", "must exceed the initial time"));
    }
    if cfg.stride == 0 {
        return Err(Error::config("stride", "must be at least 1"));
    }
    let mut solver = NskSolver::new(sp, initial, cfg.step)?;
    let span = cfg.t_end - initial.t;
    let target = match cfg.dt {
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return Err(Error::config("dt", format!("must be positive, got {dt}"))),
        None => (AUTO_DT_FRACTION * solver.max_stable_dt()?).min(span),
    };
    let steps = (span / target - 1e-9).ceil().max(1.0) as usize;
    let dt = span / steps as f64;

    let mut traj = Trajectory::new();
    let d0 = diagnostics(sp, initial, 0.0)?;
    let mut rates_prev = bd_rates(sp, initial)?.total();
    let mut t_prev = initial.t;
    let mut bd_integral = 0.0;
    let mut bd_constant: f64 = 1.0;
    let mut max_excess: f64 = 0.0;
    traj.push(initial.clone(), d0)?;
    let mut last = d0;
    for n in 1..=steps {
        solver.step(dt)?;
        if n % cfg.stride == 0 || n == steps {
            let st = solver.state()?;
            let diag = diagnostics(sp, &st, solver.dissipation())?;
            let rates = bd_rates(sp, &st)?.total();
            bd_integral += 0.5 * (rates + rates_prev) * (st.t - t_prev);
            rates_prev = rates;
            t_prev = st.t;
            if d0.bd_entropy > 0.0 {
                bd_constant = bd_constant.max((diag.bd_entropy + bd_integral) / d0.bd_entropy);
            }
            if d0.energy > 0.0 {
                max_excess = max_excess.max((diag.energy + diag.dissipation - d0.energy) / d0.energy);
            }
            traj.push(st, diag)?;
            last = diag;
        }
    }
    let audit = EnergyAudit {
        initial_energy: d0.energy,
        final_energy: last.energy,
        dissipation: last.dissipation,
        residual: last.energy - d0.energy + last.dissipation,
        max_excess,
        bd_constant,
        steps,
        dt,
    };
    Ok((traj, audit))
}
