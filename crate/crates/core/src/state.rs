//! Fluid states and time-sampled trajectories.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::functionals::PhysParams;
use crate::grid::Grid;

/// Density and velocity of the capillary fluid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub rho: ScalarField,
    pub u: VectorField,
    pub params: PhysParams,
    pub t: f64,
}

impl FluidState {
    pub fn new(rho: ScalarField, u: VectorField, params: PhysParams, t: f64) -> Result<Self> {
        rho.check_grid(u.grid())?;
        params.validate()?;
        Ok(FluidState { rho, u, params, t })
    }

    /// The reference state `(1, 0)`.
    pub fn equilibrium(grid: Grid, params: PhysParams) -> Self {
        FluidState {
            rho: ScalarField::constant(grid, 1.0),
            u: VectorField::zeros(grid),
            params,
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.rho.grid()
    }

    pub fn momentum(&self) -> VectorField {
        self.u.mul_scalar(&self.rho)
    }

    /// Builds a state from density and momentum, recovering `u = m / ϱ`.
    pub fn from_momentum(
        rho: ScalarField,
        m: &VectorField,
        params: PhysParams,
        t: f64,
    ) -> Result<Self> {
        crate::functionals::params::require_positive(&rho, "density")?;
        let u = m.map_comps(|c| c.zip_map(&rho, |a, r| a / r));
        Self::new(rho, u, params, t)
    }

    pub fn mass(&self) -> f64 {
        self.rho.integral()
    }
}

/// Diagnostics recorded alongside each snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub mass: f64,
    pub energy: f64,
    pub bd_entropy: f64,
    /// `2ν ∫₀ᵗ ∫ ϱ|Du|²`.
    pub dissipation: f64,
    pub min_rho: f64,
}

/// Snapshots at strictly increasing times.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub states: Vec<FluidState>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, state: FluidState, diag: Diagnostics) -> Result<()> {
        if let Some(last) = self.states.last() {
            if !(state.t > last.t) {
                return Err(Error::InsufficientData(format!(
                    "snapshot time {} does not follow {}",
                    state.t, last.t
                )));
            }
        }
        self.states.push(state);
        self.diagnostics.push(diag);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&FluidState> {
        self.states.last()
    }
}
