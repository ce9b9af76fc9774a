use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::functionals::{lebesgue_norm, orlicz_bound, PhysParams, Window};
use crate::grid::Grid;
use crate::spectral::Spectral;
use crate::state::FluidState;

/// Sharp Fourier cutoff keeping `|k| ≤ 1/δ`.
pub fn mollify(sp: &Spectral, f: &ScalarField, delta: f64) -> Result<ScalarField> {
    if !(delta > 0.0) {
        return Err(Error::config("delta", format!("must be positive, got {delta}")));
    }
    let kc = 1.0 / delta;
    Ok(sp.inverse(&sp.radial_multiplier(&sp.forward(f), |k| if k <= kc { 1.0 } else { 0.0 })))
}

pub fn mollify_vec(sp: &Spectral, v: &VectorField, delta: f64) -> Result<VectorField> {
    let comps = v
        .comps()
        .iter()
        .map(|c| mollify(sp, c, delta))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

fn gaussian(grid: &Grid, x: [f64; 3], width: f64) -> (f64, [f64; 3]) {
    let c = grid.center();
    let mut r2 = 0.0;
    let mut dx = [0.0; 3];
    for a in 0..grid.dim() {
        dx[a] = x[a] - c[a];
        r2 += dx[a] * dx[a];
    }
    ((-r2 / (width * width)).exp(), dx)
}

/// Localized density profile centred in the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarProfile {
    Zero,
    Gaussian { amplitude: f64, width: f64 },
}

impl ScalarProfile {
    pub fn parse(id: &str, amplitude: f64, width: f64) -> Result<Self> {
        match id {
            "zero" => Ok(ScalarProfile::Zero),
            "gaussian" => Ok(ScalarProfile::Gaussian { amplitude, width }),
            _ => Err(Error::config("density_profile", format!("unknown profile `{id}`"))),
        }
    }

    pub fn sample(&self, grid: Grid) -> ScalarField {
        match *self {
            ScalarProfile::Zero => ScalarField::zeros(grid),
            ScalarProfile::Gaussian { amplitude, width } => {
                ScalarField::from_fn(grid, |x| amplitude * gaussian(&grid, x, width).0)
            }
        }
    }
}

/// Velocity profile; `Vortex` and `TaylorGreen` are divergence-free, `Source`
/// is a gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityProfile {
    Zero,
    /// `∇⊥ψ` in 2D and `∇ψ × (1,1,1)/√3` in 3D for a Gaussian stream function.
    Vortex { amplitude: f64, width: f64 },
    /// `∇φ` for a Gaussian potential.
    Source { amplitude: f64, width: f64 },
    /// Periodic cellular flow with one cell per box period.
    TaylorGreen { amplitude: f64 },
}

impl VelocityProfile {
    pub fn parse(id: &str, amplitude: f64, width: f64) -> Result<Self> {
        match id {
            "zero" => Ok(VelocityProfile::Zero),
            "vortex" => Ok(VelocityProfile::Vortex { amplitude, width }),
            "source" => Ok(VelocityProfile::Source { amplitude, width }),
            "taylor-green" => Ok(VelocityProfile::TaylorGreen { amplitude }),
            _ => Err(Error::config("velocity_profile", format!("unknown profile `{id}`"))),
        }
    }

    pub fn sample(&self, grid: Grid) -> VectorField {
        let d = grid.dim();
        match *self {
            VelocityProfile::Zero => VectorField::zeros(grid),
            VelocityProfile::Vortex { amplitude, width } => VectorField::from_fn(grid, |x| {
                let (g, dx) = gaussian(&grid, x, width);
                // ∇ψ for ψ = -(A w²/2) e^{-r²/w²} is A dx e^{-r²/w²}
                let gp = [amplitude * dx[0] * g, amplitude * dx[1] * g, amplitude * dx[2] * g];
                if d == 2 {
                    [-gp[1], gp[0], 0.0]
                } else {
                    let s = 1.0 / 3f64.sqrt();
                    [s * (gp[1] - gp[2]), s * (gp[2] - gp[0]), s * (gp[0] - gp[1])]
                }
            }),
            VelocityProfile::Source { amplitude, width } => VectorField::from_fn(grid, |x| {
                let (g, dx) = gaussian(&grid, x, width);
                let c = -2.0 * amplitude / width * g;
                [c * dx[0], c * dx[1], c * dx[2]]
            }),
            VelocityProfile::TaylorGreen { amplitude } => {
                let k = grid.fundamental();
                VectorField::from_fn(grid, |x| {
                    let (sx, cx) = (k * x[0]).sin_cos();
                    let (sy, cy) = (k * x[1]).sin_cos();
                    if d == 2 {
                        [-amplitude * cx * sy, amplitude * sx * cy, 0.0]
                    } else {
                        let cz = (k * x[2]).cos();
                        [-amplitude * cx * sy * cz, amplitude * sx * cy * cz, 0.0]
                    }
                })
            }
        }
    }
}

/// Family of ill-prepared initial data indexed by `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataFamily {
    pub density: ScalarProfile,
    pub solenoidal: VelocityProfile,
    pub irrotational: VelocityProfile,
    /// Cutoff scale of the acoustic data of the test pair.
    pub delta: f64,
    /// Size of the seeded perturbations `ε c ξ` added to `s⁰` and `u⁰`.
    pub corrector: f64,
    /// Width of the Gaussian envelope localizing the perturbations.
    pub envelope: f64,
    pub seed: u64,
}

impl Default for DataFamily {
    fn default() -> Self {
        DataFamily {
            density: ScalarProfile::Gaussian { amplitude: 1.0, width: 2.5 },
            solenoidal: VelocityProfile::Vortex { amplitude: 1.0, width: 2.5 },
            irrotational: VelocityProfile::Source { amplitude: 0.5, width: 2.5 },
            delta: 1.0 / 6.0,
            corrector: 0.5,
            envelope: 5.0,
            seed: 7,
        }
    }
}

/// One row of the initial-data rate table: `‖ϱ⁰-1‖_{L^q}` against `ε^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqRate {
    pub q: f64,
    pub norm: f64,
    pub exponent: f64,
    pub ratio: f64,
}

/// Measured initial-data quantities and their ratios to the predicted rates.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRates {
    pub eps: f64,
    pub gamma: f64,
    pub dim: usize,
    /// Predicted exponent of `‖ϱ⁰-1‖_{L²}`: `4/(6-γ)` for `d = 3, γ < 2`, else 1.
    pub rate: f64,
    pub rho_l2: f64,
    pub rho_ratio: f64,
    pub sqrt_l2: f64,
    pub sqrt_ratio: f64,
    /// Orlicz integral divided by `ε²`.
    pub orlicz_ratio: f64,
    pub momentum_l2: f64,
    pub sigma_l2: f64,
    /// `|√ϱ⁰ - 1| ≤ |ϱ⁰ - 1|` at every grid point.
    pub sqrt_pointwise: bool,
    pub lq: Vec<LqRate>,
}

/// Generated data with the pieces the test pair is built from.
#[derive(Debug, Clone)]
pub struct IllPrepared {
    pub state: FluidState,
    /// `σ⁰_ε`.
    pub sigma: ScalarField,
    /// Limit velocity `u⁰` (before the corrector).
    pub u0: VectorField,
    /// `s⁰_δ`.
    pub s0_delta: ScalarField,
    /// `(Q u⁰)_δ`.
    pub grad_phi0: VectorField,
    /// `P u⁰`.
    pub u_euler0: VectorField,
    pub table: DataRates,
}

/// Seeded noise under a Gaussian envelope of width `width`, cut off at
/// `|k| ≤ 1/δ` and normalized to unit maximum.
fn noise(sp: &Spectral, seed: u64, stream: u64, width: f64, delta: f64) -> Result<ScalarField> {
    let g = *sp.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let raw: Vec<f64> = (0..g.len())
        .map(|i| rng.gen_range(-1.0..1.0) * gaussian(&g, g.position(i), width).0)
        .collect();
    let f = sp.dealias(&mollify(sp, &ScalarField::new(g, raw)?, delta)?);
    let m = f.max_abs();
    if m > 0.0 {
        Ok(f.scale(1.0 / m))
    } else {
        Ok(f)
    }
}

/// `‖ϱ⁰-1‖_{L²}` exponent predicted for the given dimension and `γ`.
pub fn predicted_rate(dim: usize, gamma: f64) -> f64 {
    if dim == 3 && gamma < 2.0 {
        4.0 / (6.0 - gamma)
    } else {
        1.0
    }
}

pub fn data_rates(
    sp: &Spectral,
    state: &FluidState,
    sigma: &ScalarField,
) -> Result<DataRates> {
    let p = &state.params;
    let g = sp.grid();
    let eps = p.eps;
    let dim = g.dim();
    let rate = predicted_rate(dim, p.gamma);
    let w = Window::Global;
    let fluct = state.rho.map(|r| r - 1.0);
    let sq = state.rho.map(|r| r.sqrt() - 1.0);
    let rho_l2 = fluct.l2_norm();
    let sqrt_l2 = sq.l2_norm();
    let (_, orlicz_ratio) = orlicz_bound(&state.rho, p.gamma, eps)?;
    let momentum_l2 = state.u.mul_scalar(&state.rho.map(f64::sqrt)).l2_norm();
    let sqrt_pointwise = fluct
        .values()
        .iter()
        .zip(sq.values())
        .all(|(a, b)| b.abs() <= a.abs());
    let qs: &[f64] = if dim == 3 { &[2.0, 3.0, 4.0, 5.0] } else { &[2.0, 4.0, 6.0, 8.0] };
    let lq = qs
        .iter()
        .map(|&q| {
            let exponent = if dim == 3 {
                crate::functionals::beta_exponent(q)?
            } else {
                2.0 / q
            };
            let norm = lebesgue_norm(&fluct, q, &w)?;
            Ok(LqRate { q, norm, exponent, ratio: norm / eps.powf(exponent) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DataRates {
        eps,
        gamma: p.gamma,
        dim,
        rate,
        rho_l2,
        rho_ratio: rho_l2 / eps.powf(rate),
        sqrt_l2,
        sqrt_ratio: sqrt_l2 / eps.powf(rate),
        orlicz_ratio,
        momentum_l2,
        sigma_l2: sigma.l2_norm(),
        sqrt_pointwise,
        lq,
    })
}

/// `ϱ⁰ = 1 + ε σ⁰_ε`, `u⁰_ε = u⁰ + ε c ξ` with `σ⁰_ε = s⁰ + ε c ξ'`.
pub fn make_ill_prepared(
    sp: &Spectral,
    family: &DataFamily,
    params: PhysParams,
    rho_min: f64,
) -> Result<IllPrepared> {
    params.validate()?;
    let g = *sp.grid();
    let eps = params.eps;
    let s0 = sp.dealias(&family.density.sample(g));
    let sol = sp.helmholtz_p(&family.solenoidal.sample(g));
    let irr = sp.helmholtz_q(&family.irrotational.sample(g));
    let u0 = (&sol + &irr).map_comps(|c| sp.dealias(c));
    let c = family.corrector * eps;
    let env = family.envelope;
    let sigma = &s0 + &noise(sp, family.seed, 0, env, family.delta)?.scale(c);
    let xi = (0..g.dim())
        .map(|a| Ok(noise(sp, family.seed, 1 + a as u64, env, family.delta)?.scale(c)))
        .collect::<Result<Vec<_>>>()?;
    let u_eps = &u0 + &VectorField::new(xi)?;
    let rho = sigma.map(|s| 1.0 + eps * s);
    if rho.min() < rho_min {
        return Err(Error::Domain(format!(
            "initial density {:.4e} below {rho_min} at eps = {eps}",
            rho.min()
        )));
    }
    let state = FluidState::new(rho, u_eps, params, 0.0)?;
    let table = data_rates(sp, &state, &sigma)?;
    let s0_delta = mollify(sp, &s0, family.delta)?;
    let grad_phi0 = mollify_vec(sp, &sp.helmholtz_q(&u0), family.delta)?;
    let u_euler0 = sp.helmholtz_p(&u0);
    Ok(IllPrepared { state, sigma, u0, s0_delta, grad_phi0, u_euler0, table })
}
