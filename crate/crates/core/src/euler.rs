//! Pseudo-spectral incompressible Euler solver used as the limit reference.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, Spectrum, VectorField};
use crate::spectral::Spectral;

/// Advective CFL constant `dt · k_max · max|u| ≤ EULER_CFL`.
pub const EULER_CFL: f64 = 1.0;

/// Divergence-free velocity with its zero-mean pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerState {
    pub u: VectorField,
    pub pi: ScalarField,
    pub t: f64,
}

impl EulerState {
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.u.norm_sq().integral()
    }

    /// `‖div u‖ / ‖u‖`.
    pub fn divergence_ratio(&self, sp: &Spectral) -> f64 {
        let n = self.u.l2_norm();
        if n == 0.0 {
            0.0
        } else {
            sp.divergence(&self.u).l2_norm() / n
        }
    }
}

/// Dealiased `(u·∇)u` on the Fourier side.
fn advection_spec(sp: &Spectral, u: &VectorField) -> Vec<Spectrum> {
    let d = u.dim();
    let grads: Vec<VectorField> = (0..d).map(|i| sp.gradient(u.comp(i))).collect();
    (0..d)
        .map(|i| {
            let mut acc = ScalarField::zeros(*u.grid());
            for j in 0..d {
                acc = &acc + &(u.comp(j) * grads[i].comp(j));
            }
            let mut s = sp.forward(&acc);
            sp.dealias_spec(&mut s);
            s
        })
        .collect()
}

/// Pressure from `ΔΠ = -div((u·∇)u)`, zero mean.
pub fn pressure_poisson(sp: &Spectral, u: &VectorField) -> ScalarField {
    let adv = advection_spec(sp, u);
    sp.inverse(&sp.inv_lap_spec(&sp.div_spec(&adv)).scale(-1.0))
}

/// `∂_t u = -P((u·∇)u)`.
pub fn euler_tendency(sp: &Spectral, u: &VectorField) -> VectorField {
    sp.inverse_vec(&sp.p_spec(&advection_spec(sp, u)).iter().map(|s| s.scale(-1.0)).collect::<Vec<_>>())
}

/// `‖ΔΠ + div((u·∇)u)‖` for the stored pressure.
pub fn pressure_residual(sp: &Spectral, state: &EulerState) -> f64 {
    let adv = advection_spec(sp, &state.u);
    let lhs = sp.lap_spec(&sp.forward(&state.pi)).add(&sp.div_spec(&adv));
    sp.inverse(&lhs).l2_norm()
}

/// Leray projection of arbitrary initial data.
pub fn project_initial(sp: &Spectral, u0: &VectorField) -> Result<EulerState> {
    u0.comp(0).check_grid(sp.grid())?;
    let u = sp.helmholtz_p(u0);
    let pi = pressure_poisson(sp, &u);
    Ok(EulerState { u, pi, t: 0.0 })
}

/// Explicit 4-stage state vector: vorticity plus mean velocity in 2D, the
/// projected velocity in 3D.
enum Vars {
    Planar { omega: Spectrum, mean: [f64; 2] },
    Spatial { u: Vec<Spectrum> },
}

fn velocity_from_vorticity(sp: &Spectral, omega: &Spectrum, mean: [f64; 2]) -> VectorField {
    let psi = sp.inv_lap_spec(omega);
    let i = Complex64::new(0.0, 1.0);
    let (kx, ky) = (sp.k(0), sp.k(1));
    let mut u1 = psi.map_indexed(|idx, c| -i * ky[idx] * c);
    let mut u2 = psi.map_indexed(|idx, c| i * kx[idx] * c);
    let n = sp.grid().len() as f64;
    u1.coeffs_mut()[0] = Complex64::new(mean[0] * n, 0.0);
    u2.coeffs_mut()[0] = Complex64::new(mean[1] * n, 0.0);
    sp.inverse_vec(&[u1, u2])
}

fn vorticity(sp: &Spectral, u: &[Spectrum]) -> Spectrum {
    sp.d_spec(&u[1], 0).sub(&sp.d_spec(&u[0], 1))
}

impl Vars {
    fn from_velocity(sp: &Spectral, u: &VectorField) -> Vars {
        let uh = sp.forward_vec(u);
        if u.dim() == 2 {
            let m = u.means();
            Vars::Planar { omega: vorticity(sp, &uh), mean: [m[0], m[1]] }
        } else {
            Vars::Spatial { u: sp.p_spec(&uh) }
        }
    }

    fn velocity(&self, sp: &Spectral) -> VectorField {
        match self {
            Vars::Planar { omega, mean } => velocity_from_vorticity(sp, omega, *mean),
            Vars::Spatial { u } => sp.inverse_vec(u),
        }
    }

    fn tendency(&self, sp: &Spectral) -> Vars {
        let u = self.velocity(sp);
        match self {
            Vars::Planar { omega, .. } => {
                let w = sp.inverse(omega);
                let gw = sp.gradient(&w);
                let mut s = sp.forward(&u.dot(&gw));
                sp.dealias_spec(&mut s);
                Vars::Planar { omega: s.scale(-1.0), mean: [0.0; 2] }
            }
            Vars::Spatial { .. } => {
                // rotation form: (u·∇)u = ω × u + ∇|u|²/2, the gradient is projected out
                let uh = sp.forward_vec(&u);
                let w: Vec<ScalarField> = (0..3)
                    .map(|a| {
                        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                        sp.inverse(&sp.d_spec(&uh[c], b).sub(&sp.d_spec(&uh[b], c)))
                    })
                    .collect();
                let cross: Vec<Spectrum> = (0..3)
                    .map(|a| {
                        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                        let f = &(&w[b] * u.comp(c)) - &(&w[c] * u.comp(b));
                        let mut s = sp.forward(&f);
                        sp.dealias_spec(&mut s);
                        s.scale(-1.0)
                    })
                    .collect();
                Vars::Spatial { u: sp.p_spec(&cross) }
            }
        }
    }

    fn axpy(&self, c: f64, k: &Vars) -> Vars {
        match (self, k) {
            (Vars::Planar { omega, mean }, Vars::Planar { omega: ko, mean: km }) => Vars::Planar {
                omega: omega.add(&ko.scale(c)),
                mean: [mean[0] + c * km[0], mean[1] + c * km[1]],
            },
            (Vars::Spatial { u }, Vars::Spatial { u: ku }) => Vars::Spatial {
                u: u.iter().zip(ku).map(|(a, b)| a.add(&b.scale(c))).collect(),
            },
            _ => unreachable!("mixed dimensions"),
        }
    }
}

/// Largest step allowed by the advective CFL condition.
pub fn max_stable_dt(sp: &Spectral, u: &VectorField) -> f64 {
    let kmax = sp.grid().dealias_cutoff() * (sp.grid().dim() as f64).sqrt();
    let v = u.max_magnitude();
    if v == 0.0 {
        f64::INFINITY
    } else {
        EULER_CFL / (kmax * v)
    }
}

/// Classical four-stage step; the pressure is recovered at the new time.
pub fn euler_step(sp: &Spectral, state: &EulerState, dt: f64) -> Result<EulerState> {
    if !(dt > 0.0) {
        return Err(Error::config("dt", format!("must be positive, got {dt}")));
    }
    let limit = max_stable_dt(sp, &state.u);
    if dt > limit {
        return Err(Error::NumericalAbort(format!(
            "advective CFL violated at t = {:.6e}: dt = {dt:.3e} exceeds {limit:.3e}",
            state.t
        )));
    }
    let y0 = Vars::from_velocity(sp, &state.u);
    let k1 = y0.tendency(sp);
    let k2 = y0.axpy(0.5 * dt, &k1).tendency(sp);
    let k3 = y0.axpy(0.5 * dt, &k2).tendency(sp);
    let k4 = y0.axpy(dt, &k3).tendency(sp);
    let y = y0
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    let u = y.velocity(sp);
    let pi = pressure_poisson(sp, &u);
    Ok(EulerState { u, pi, t: state.t + dt })
}

/// Samples of the Euler flow at `times`, stepping with at most `dt_max`.
pub fn euler_trajectory(
    sp: &Spectral,
    initial: &EulerState,
    times: &[f64],
    dt_max: f64,
) -> Result<Vec<EulerState>> {
    let mut out = Vec::with_capacity(times.len());
    let mut cur = initial.clone();
    for &t in times {
        if t < cur.t - 1e-12 {
            return Err(Error::config("times", "must be nondecreasing and not before the initial time"));
        }
        let span = t - cur.t;
        if span > 1e-14 {
            let n = (span / dt_max).ceil().max(1.0) as usize;
            let dt = span / n as f64;
            for _ in 0..n {
                cur = euler_step(sp, &cur, dt)?;
            }
            cur.t = t;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use std::f64::consts::PI;

    fn taylor_green(g: Grid) -> VectorField {
        VectorField::from_fn(g, |x| [-x[0].cos() * x[1].sin(), x[0].sin() * x[1].cos(), 0.0])
    }

    #[test]
    fn zero_velocity_stays_zero() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let s = project_initial(&sp, &VectorField::zeros(g)).unwrap();
        let n = euler_step(&sp, &s, 0.1).unwrap();
        assert_eq!(n.u.max_magnitude(), 0.0);
        assert_eq!(n.pi.max_abs(), 0.0);
    }

    #[test]
    fn taylor_green_is_steady() {
        let g = Grid::new(2, 32, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let u0 = taylor_green(g);
        // residual substitution: (u·∇)u + ∇Π = 0 with Π = -(cos 2x + cos 2y)/4
        let pi_exact = ScalarField::from_fn(g, |x| -0.25 * ((2.0 * x[0]).cos() + (2.0 * x[1]).cos()));
        let s0 = project_initial(&sp, &u0).unwrap();
        assert!((&s0.pi - &pi_exact).max_abs() < 1e-13);
        assert!(euler_tendency(&sp, &u0).max_magnitude() < 1e-13);
        let traj = euler_trajectory(&sp, &s0, &[0.35, 1.0], 0.05).unwrap();
        assert!((&traj[0].u - &u0).max_magnitude() < 1e-8);
        assert!((&traj[1].u - &u0).max_magnitude() < 1e-8);
    }

    #[test]
    fn projection_cases() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let u0 = taylor_green(g);
        assert!((&project_initial(&sp, &u0).unwrap().u - &u0).max_magnitude() < 1e-14);
        let grad = sp.gradient(&ScalarField::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin()));
        let grad = &grad + &VectorField::constant(g, &[0.3, -0.1]);
        let p = project_initial(&sp, &grad).unwrap().u;
        assert!((&p - &VectorField::constant(g, &[0.3, -0.1])).max_magnitude() < 1e-14);
    }

    #[test]
    fn spatial_flow_conserves_energy_and_divergence() {
        let g = Grid::new(3, 16, 2.0 * PI).unwrap();
        let sp = Spectral::new(g);
        let u0 = VectorField::from_fn(g, |x| {
            [
                x[1].sin() + 0.5 * x[2].cos(),
                x[2].sin() + 0.5 * x[0].cos(),
                x[0].sin() + 0.5 * x[1].cos(),
            ]
        });
        let u0 = &u0 + &VectorField::from_fn(g, |x| [0.0, 0.0, 0.2 * (x[0] + x[1]).cos()]);
        let s0 = project_initial(&sp, &u0).unwrap();
        let s = euler_trajectory(&sp, &s0, &[0.3], 0.01).unwrap().pop().unwrap();
        assert!(s.divergence_ratio(&sp) < 1e-11);
        assert!((s.kinetic_energy() / s0.kinetic_energy() - 1.0).abs() < 1e-6);
        assert!(pressure_residual(&sp, &s) <= 1e-10 * s.pi.l2_norm().max(1.0));
        assert!(s.pi.mean().abs() < 1e-14);
    }
}
