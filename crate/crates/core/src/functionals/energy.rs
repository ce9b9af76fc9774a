use crate::error::Result;
use crate::field::{ScalarField, VectorField};
use crate::functionals::params::{internal_energy_with, require_positive};
use crate::spectral::Spectral;
use crate::state::FluidState;

/// Velocity gradient `G[i][j] = ∂_j u_i`.
pub fn velocity_gradient(sp: &Spectral, u: &VectorField) -> Vec<Vec<ScalarField>> {
    u.comps()
        .iter()
        .map(|c| sp.gradient(c).into_comps())
        .collect()
}

/// `|Du|²` with `Du` the symmetric part of the velocity gradient.
pub fn strain_sq(grad: &[Vec<ScalarField>]) -> ScalarField {
    let d = grad.len();
    let grid = *grad[0][0].grid();
    let mut out = vec![0.0; grid.len()];
    for i in 0..d {
        for j in 0..d {
            let a = grad[i][j].values();
            let b = grad[j][i].values();
            for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b)) {
                let s = 0.5 * (x + y);
                *o += s * s;
            }
        }
    }
    ScalarField::new(grid, out).expect("sized by grid")
}

/// `|Au|²` with `Au` the antisymmetric part of the velocity gradient.
pub fn rotation_sq(grad: &[Vec<ScalarField>]) -> ScalarField {
    let d = grad.len();
    let grid = *grad[0][0].grid();
    let mut out = vec![0.0; grid.len()];
    for i in 0..d {
        for j in 0..d {
            let a = grad[i][j].values();
            let b = grad[j][i].values();
            for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b)) {
                let s = 0.5 * (x - y);
                *o += s * s;
            }
        }
    }
    ScalarField::new(grid, out).expect("sized by grid")
}

/// Kinetic, potential and capillary contributions to the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub kinetic: f64,
    /// `∫ H(ϱ) / ε²`.
    pub internal: f64,
    pub capillary: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.internal + self.capillary
    }
}

pub fn energy_parts(sp: &Spectral, state: &FluidState) -> Result<EnergyParts> {
    let p = &state.params;
    let h = internal_energy_with(&state.rho, &p.eos())?;
    let kin = state.u.norm_sq().zip_map(&state.rho, |u2, r| 0.5 * r * u2);
    let grad = sp.gradient(&state.rho);
    Ok(EnergyParts {
        kinetic: kin.integral(),
        internal: h.integral() / (p.eps * p.eps),
        capillary: p.kappa * p.kappa * grad.norm_sq().integral(),
    })
}

/// `E = ∫ ½ϱ|u|² + H(ϱ)/ε² + κ²|∇ϱ|²`.
pub fn total_energy(sp: &Spectral, state: &FluidState) -> Result<f64> {
    Ok(energy_parts(sp, state)?.total())
}

/// `B = ∫ ½|√ϱ u + 2ν∇√ϱ|² + κ²|∇ϱ|² + H(ϱ)/ε²`.
pub fn bd_entropy(sp: &Spectral, state: &FluidState) -> Result<f64> {
    let p = &state.params;
    let parts = energy_parts(sp, state)?;
    if p.nu == 0.0 {
        return Ok(parts.total());
    }
    let sqrt_rho = state.rho.map(f64::sqrt);
    let g = sp.gradient(&sqrt_rho);
    let d = state.u.dim();
    let mut acc = vec![0.0; state.rho.values().len()];
    for a in 0..d {
        let u = state.u.comp(a).values();
        let ga = g.comp(a).values();
        for (i, o) in acc.iter_mut().enumerate() {
            let v = sqrt_rho.values()[i] * u[i] + 2.0 * p.nu * ga[i];
            *o += v * v;
        }
    }
    let kin = 0.5 * ScalarField::new(*state.grid(), acc)?.integral();
    Ok(kin + parts.internal + parts.capillary)
}

/// Instantaneous rate `2ν ∫ ϱ|Du|²` of viscous energy loss.
pub fn dissipation_rate(sp: &Spectral, state: &FluidState) -> f64 {
    let nu = state.params.nu;
    if nu == 0.0 {
        return 0.0;
    }
    let g = velocity_gradient(sp, &state.u);
    2.0 * nu * (&state.rho * &strain_sq(&g)).integral()
}

/// Integrands of the four viscous terms controlled by the BD entropy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BdRates {
    /// `2ν ∫ ϱ|Du|²`.
    pub strain: f64,
    /// `2ν ∫ ϱ|Au|²`.
    pub rotation: f64,
    /// `(8ν/γ²) ∫ |∇ϱ^{γ/2}|² / ε²`.
    pub pressure: f64,
    /// `4νκ² ∫ |Δϱ|²`.
    pub capillary: f64,
}

impl BdRates {
    pub fn total(&self) -> f64 {
        self.strain + self.rotation + self.pressure + self.capillary
    }
}

pub fn bd_rates(sp: &Spectral, state: &FluidState) -> Result<BdRates> {
    let p = &state.params;
    require_positive(&state.rho, "density")?;
    let g = velocity_gradient(sp, &state.u);
    let strain = 2.0 * p.nu * (&state.rho * &strain_sq(&g)).integral();
    let rotation = 2.0 * p.nu * (&state.rho * &rotation_sq(&g)).integral();
    let rg = state.rho.map(|r| r.powf(0.5 * p.gamma));
    let pressure = 8.0 * p.nu / (p.gamma * p.gamma) * sp.gradient(&rg).norm_sq().integral()
        / (p.eps * p.eps);
    let lap = sp.laplacian(&state.rho);
    let capillary = 4.0 * p.nu * p.kappa * p.kappa * (&lap * &lap).integral();
    Ok(BdRates {
        strain,
        rotation,
        pressure,
        capillary,
    })
}

/// Split integral `∫ |ϱ-1|² 1{|ϱ-1| ≤ ½} + |ϱ-1|^γ 1{|ϱ-1| > ½}` and its ratio to `ε²`.
pub fn orlicz_bound(rho: &ScalarField, gamma: f64, eps: f64) -> Result<(f64, f64)> {
    require_positive(rho, "density")?;
    let f = rho.map(|r| {
        let d = (r - 1.0).abs();
        if d <= 0.5 {
            d * d
        } else {
            d.powf(gamma)
        }
    });
    let v = f.integral();
    Ok((v, v / (eps * eps)))
}
