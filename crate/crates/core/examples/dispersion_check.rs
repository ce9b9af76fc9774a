//! Central-difference residual of the density wave equation along the exact
//! acoustic flow, refined in Δt.

use nsk_limit::acoustic::{dispersion_residual, AcousticParams, AcousticState};
use nsk_limit::harness::{fit_rate, mollify, ScalarProfile};
use nsk_limit::{Grid, Spectral, VectorField};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(2, 64, 32.0)?;
    let sp = Spectral::new(grid);
    let s0 = mollify(&sp, &ScalarProfile::Gaussian { amplitude: 1.0, width: 2.0 }.sample(grid), 0.25)?;
    let params = AcousticParams::new(0.1, 0.5, 1.0)?;
    let state = AcousticState::new(s0, VectorField::zeros(grid), params)?;

    let base = 0.2 / params.omega(4.0);
    let mut pairs = Vec::new();
    for i in 0..6 {
        let dt = base / 2f64.powi(i);
        let r = dispersion_residual(&sp, &state, 0.5, dt)?;
        println!("dt = {dt:.4e}  residual = {r:.4e}");
        pairs.push((dt, r));
    }
    println!("observed order {:.4}", fit_rate(&pairs)?.slope);
    Ok(())
}
