//! Time integration of the capillary Navier–Stokes system.

mod integrator;
mod physics;
mod simulate;

pub use integrator::{explicit_rate, step, NskSolver, StepConfig};
pub use physics::{korteweg_force, korteweg_tensor, momentum_rhs, tensor_divergence};
pub use simulate::{diagnostics, simulate, EnergyAudit, SimConfig, AUTO_DT_FRACTION};
pub use crate::functionals::params::pressure;
