//! The Taylor–Green cell is a steady incompressible Euler flow.

use std::f64::consts::PI;

use nsk_limit::euler::{euler_trajectory, pressure_residual, project_initial};
use nsk_limit::{Grid, Spectral, VectorField};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(2, 64, 2.0 * PI)?;
    let sp = Spectral::new(grid);
    let u0 = VectorField::from_fn(grid, |x| [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]);
    let start = project_initial(&sp, &u0)?;
    let times: Vec<f64> = (1..=5).map(|i| 0.2 * i as f64).collect();
    for s in euler_trajectory(&sp, &start, &times, 0.01)? {
        println!(
            "t = {:.1}  |u - u0| = {:.2e}  KE = {:.15}  pressure residual = {:.1e}",
            s.t,
            (&s.u - &u0).max_magnitude(),
            s.kinetic_energy(),
            pressure_residual(&sp, &s)
        );
    }
    Ok(())
}
