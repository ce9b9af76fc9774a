use crate::error::Result;
use crate::field::{ScalarField, Spectrum, VectorField};
use crate::functionals::params::{pressure_with, require_positive};
use crate::functionals::energy::velocity_gradient;
use crate::spectral::Spectral;
use crate::functionals::PhysParams;
use crate::state::FluidState;

/// Capillary force `2κ² ϱ ∇Δϱ`.
pub fn korteweg_force(sp: &Spectral, rho: &ScalarField, kappa: f64) -> VectorField {
    let g = sp.inverse_vec(&sp.grad_spec(&sp.lap_spec(&sp.forward(rho))));
    g.mul_scalar(rho).scale(2.0 * kappa * kappa)
}

/// Scaled Korteweg tensor `2κ² K` with `K = (ϱΔϱ + ½|∇ϱ|²) I - ∇ϱ ⊗ ∇ϱ`,
/// row-major. Its row divergence is [`korteweg_force`].
pub fn korteweg_tensor(sp: &Spectral, rho: &ScalarField, kappa: f64) -> Vec<Vec<ScalarField>> {
    let d = sp.grid().dim();
    let c = 2.0 * kappa * kappa;
    let grad = sp.gradient(rho);
    let lap = sp.laplacian(rho);
    let iso = &(rho * &lap) + &grad.norm_sq().scale(0.5);
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let outer = grad.comp(i) * grad.comp(j);
                    let k = if i == j { &iso - &outer } else { -&outer };
                    k.scale(c)
                })
                .collect()
        })
        .collect()
}

/// Row-wise divergence `(div T)_i = Σ_j ∂_j T_ij`, computed on the Fourier side.
pub fn tensor_divergence_spec(sp: &Spectral, t: &[Vec<ScalarField>]) -> Vec<Spectrum> {
    t.iter()
        .map(|row| {
            let specs: Vec<Spectrum> = row.iter().map(|f| sp.forward(f)).collect();
            sp.div_spec(&specs)
        })
        .collect()
}

pub fn tensor_divergence(sp: &Spectral, t: &[Vec<ScalarField>]) -> VectorField {
    sp.inverse_vec(&tensor_divergence_spec(sp, t))
}

/// Which part of the momentum tendency to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Part {
    Full,
    /// Everything except the constant-coefficient acoustic and capillary terms
    /// linearized around `(1, 0)`.
    Remainder,
}

/// Dealiased momentum tendency on the Fourier side together with `2ν ∫ ϱ|Du|²`.
pub(crate) fn tendency_spec(
    sp: &Spectral,
    rho: &ScalarField,
    u: &VectorField,
    params: &PhysParams,
    part: Part,
) -> Result<(Vec<Spectrum>, f64)> {
    require_positive(rho, "density")?;
    let d = sp.grid().dim();
    let eos = params.eos();
    let grad_u = velocity_gradient(sp, u);
    let mut strain_sq = ScalarField::zeros(*rho.grid());
    let mut flux: Vec<Vec<ScalarField>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let conv = &(rho * u.comp(i)) * u.comp(j);
            let strain = (&grad_u[i][j] + &grad_u[j][i]).scale(0.5);
            strain_sq = &strain_sq + &(&strain * &strain);
            let visc = (rho * &strain).scale(2.0 * params.nu);
            row.push(&visc - &conv);
        }
        flux.push(row);
    }
    let dissipation = 2.0 * params.nu * (rho * &strain_sq).integral();
    let mut out = tensor_divergence_spec(sp, &flux);
    let c2 = eos.sound_speed_sq();
    let press = match part {
        Part::Full => pressure_with(rho, &eos)?,
        Part::Remainder => rho.map(|r| eos.pressure(r) - eos.pressure(1.0) - c2 * (r - 1.0)),
    };
    let gp = sp.grad_spec(&sp.forward(&press));
    let weight = match part {
        Part::Full => rho.clone(),
        Part::Remainder => rho.map(|r| r - 1.0),
    };
    let cap = sp
        .inverse_vec(&sp.grad_spec(&sp.lap_spec(&sp.forward(rho))))
        .mul_scalar(&weight)
        .scale(2.0 * params.kappa * params.kappa);
    let cap = sp.forward_vec(&cap);
    let inv_e2 = 1.0 / (params.eps * params.eps);
    for a in 0..d {
        out[a] = out[a].sub(&gp[a].scale(inv_e2)).add(&cap[a]);
        sp.dealias_spec(&mut out[a]);
    }
    Ok((out, dissipation))
}

/// Full momentum tendency
/// `-div(ϱu⊗u) - ∇p/ε² + 2ν div(ϱ Du) + 2κ² ϱ∇Δϱ`, every product dealiased.
pub fn momentum_rhs(sp: &Spectral, state: &FluidState) -> Result<VectorField> {
    let (out, _) = tendency_spec(sp, &state.rho, &state.u, &state.params, Part::Full)?;
    Ok(sp.inverse_vec(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::PhysParams;
    use crate::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn constant_density_has_no_capillary_force() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let f = korteweg_force(&sp, &ScalarField::constant(g, 1.3), 0.7);
        assert!(f.max_magnitude() < 1e-14);
    }

    #[test]
    fn single_mode_capillary_force() {
        // ϱ = 1 + a cos x: ∇Δϱ = (a sin x, 0), force = 2κ² (1 + a cos x) a sin x
        let g = Grid::new(2, 32, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let (a, kappa) = (0.2, 0.8);
        let rho = ScalarField::from_fn(g, |x| 1.0 + a * x[0].cos());
        let f = korteweg_force(&sp, &rho, kappa);
        let expect = ScalarField::from_fn(g, |x| 2.0 * kappa * kappa * (1.0 + a * x[0].cos()) * a * x[0].sin());
        assert!((f.comp(0) - &expect).max_abs() < 1e-13);
        assert!(f.comp(1).max_abs() < 1e-14);
    }

    #[test]
    fn tensor_divergence_matches_force() {
        // band-limited to N/6 so every product stays resolved
        let g = Grid::new(3, 32, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let rho = ScalarField::from_fn(g, |x| {
            1.0 + 0.1 * (x[0] + 2.0 * x[1]).cos() + 0.05 * (3.0 * x[2] - x[0]).sin() + 0.07 * (2.0 * x[1]).cos()
        });
        let div_k = tensor_divergence(&sp, &korteweg_tensor(&sp, &rho, 0.7));
        let force = korteweg_force(&sp, &rho, 0.7);
        let diff = &div_k - &force;
        assert!(diff.max_magnitude() < 1e-10 * force.max_magnitude().max(1.0));
    }

    #[test]
    fn equilibrium_has_zero_tendency() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let st = FluidState::equilibrium(g, PhysParams::new(0.1, 0.1, 1.0, 2.0).unwrap());
        assert!(momentum_rhs(&sp, &st).unwrap().max_magnitude() < 1e-12);
    }
}
