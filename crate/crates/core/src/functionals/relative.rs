use crate::error::Result;
use crate::field::{ScalarField, VectorField};
use crate::functionals::params::{require_positive, PhysParams};
use crate::spectral::Spectral;

/// The three nonnegative pieces of the relative energy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelativeEnergy {
    /// `∫ ½ ϱ |u - U|²`.
    pub kinetic: f64,
    /// `κ² ∫ |∇ϱ - ∇r|²`.
    pub capillary: f64,
    /// `ε⁻² ∫ H(ϱ) - H(r) - H'(r)(ϱ - r)`.
    pub internal: f64,
}

impl RelativeEnergy {
    pub fn total(&self) -> f64 {
        self.kinetic + self.capillary + self.internal
    }
}

/// Relative energy of `(ϱ, u)` with respect to the test pair `(r, U)`.
pub fn relative_energy(
    sp: &Spectral,
    rho: &ScalarField,
    u: &VectorField,
    r: &ScalarField,
    big_u: &VectorField,
    params: &PhysParams,
) -> Result<RelativeEnergy> {
    rho.check_grid(sp.grid())?;
    r.check_grid(sp.grid())?;
    u.grid().check_same(sp.grid())?;
    big_u.grid().check_same(sp.grid())?;
    require_positive(rho, "density")?;
    require_positive(r, "test density")?;
    let eos = params.eos();
    let du = u - big_u;
    let kinetic = du.norm_sq().zip_map(rho, |w, p| 0.5 * p * w).integral();
    let capillary = if params.kappa == 0.0 {
        0.0
    } else {
        let g = sp.gradient(&(rho - r));
        params.kappa * params.kappa * g.norm_sq().integral()
    };
    let internal = rho.zip_map(r, |a, b| eos.bregman(a, b)).integral() / (params.eps * params.eps);
    Ok(RelativeEnergy {
        kinetic,
        capillary,
        internal,
    })
}
