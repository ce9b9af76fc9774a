//! Runs the capillary solver on smooth periodic data and checks mass and the
//! energy balance at two step sizes.

use std::f64::consts::PI;

use nsk_limit::nsk::{simulate, SimConfig};
use nsk_limit::{FluidState, Grid, PhysParams, ScalarField, Spectral, VectorField};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(2, 64, 2.0 * PI)?;
    let sp = Spectral::new(grid);
    let params = PhysParams::new(0.5, 0.01, 0.5, 2.0)?;
    let rho = ScalarField::from_fn(grid, |x| 1.0 + 0.2 * x[0].cos() * x[1].sin());
    let u = VectorField::from_fn(grid, |x| [-0.5 * x[0].cos() * x[1].sin(), 0.5 * x[0].sin() * x[1].cos(), 0.0]);
    let initial = FluidState::new(rho, u, params, 0.0)?;

    for dt in [2e-3, 1e-3] {
        let (traj, audit) = simulate(&sp, &initial, &SimConfig::new(0.5, 50).with_dt(dt))?;
        let m0 = traj.diagnostics[0].mass;
        let drift = traj.diagnostics.iter().map(|d| (d.mass / m0 - 1.0).abs()).fold(0.0, f64::max);
        println!(
            "dt = {dt:.0e}: E {:.10} -> {:.10}, dissipated {:.6e}, residual {:.3e}, mass drift {drift:.1e}",
            audit.initial_energy,
            audit.final_energy,
            audit.dissipation,
            audit.relative_residual()
        );
    }
    Ok(())
}
