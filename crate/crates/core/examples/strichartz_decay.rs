//! Space-time norms of acoustic waves inside a window, each taken up to the
//! time the fastest waves leave it, for a sequence of ε.

use nsk_limit::acoustic::{strichartz_decay_experiment, Coupling, DecayExperiment, Horizon};
use nsk_limit::functionals::{NormSpec, Window};
use nsk_limit::harness::{mollify, mollify_vec, ScalarProfile, VelocityProfile};
use nsk_limit::{Grid, Spectral};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(3, 32, 16.0)?;
    let sp = Spectral::new(grid);
    let delta = 1.0 / 4.0;
    let s0 = mollify(&sp, &ScalarProfile::Gaussian { amplitude: 1.0, width: 2.0 }.sample(grid), delta)?;
    let m0 = mollify_vec(&sp, &sp.helmholtz_q(&VelocityProfile::Source { amplitude: 0.5, width: 2.0 }.sample(grid)), delta)?;
    let exp = DecayExperiment {
        kappa: 0.5,
        gamma: 1.5,
        coupling: Coupling::Scaled,
        eps_list: vec![0.2, 0.1, 0.05, 0.025],
        spec: NormSpec { p: 2.0, q: 6.0, s: 0.0, window: Window::centered(&grid, 0.25) },
        theta: None,
        horizon: Horizon::EscapeWindow { k_max: 1.0 / delta },
        samples: 33,
    };
    let res = strichartz_decay_experiment(&sp, &s0, &m0, &exp)?;
    for r in &res.rows {
        println!("eps = {:<6} horizon = {:.4}  norm = {:.6}", r.eps, r.horizon, r.norm);
    }
    if let Some(f) = res.fit {
        println!("slope {:.4}, residual {:.4}, ceiling {:.4}", f.slope, f.residual, res.admissibility.alpha_max);
    }
    Ok(())
}
