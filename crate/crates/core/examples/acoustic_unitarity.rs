//! Propagates localized acoustic data exactly and prints the symmetrized
//! norms, which the flow preserves.

use nsk_limit::acoustic::{AcousticEvolver, AcousticParams, AcousticState};
use nsk_limit::harness::{mollify, mollify_vec, ScalarProfile, VelocityProfile};
use nsk_limit::{Grid, Spectral};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(2, 128, 32.0)?;
    let sp = Spectral::new(grid);
    let s0 = mollify(&sp, &ScalarProfile::Gaussian { amplitude: 1.0, width: 2.5 }.sample(grid), 0.25)?;
    let m0 = mollify_vec(&sp, &sp.helmholtz_q(&VelocityProfile::Source { amplitude: 0.5, width: 2.5 }.sample(grid)), 0.25)?;
    let params = AcousticParams::new(0.1, 0.5, 2.0)?;
    let ev = AcousticEvolver::new(&sp, &AcousticState::new(s0, m0, params)?)?;

    println!("{:>6} {:>22} {:>22} {:>14}", "t", "sym L2", "sym H1", "plain L2");
    for i in 0..=10 {
        let t = i as f64;
        println!(
            "{t:>6.1} {:>22.16} {:>22.16} {:>14.8}",
            ev.symmetrized_norm_at(t, 0.0),
            ev.symmetrized_norm_at(t, 1.0),
            ev.at(t).l2_norm()
        );
    }
    Ok(())
}
