//! Size of the generated density fluctuation against ε, with the predicted
//! power and the Orlicz ratio.

use nsk_limit::harness::{fit_rate, make_ill_prepared, DataFamily};
use nsk_limit::{Grid, PhysParams, Spectral};

fn main() -> nsk_limit::Result<()> {
    let grid = Grid::new(3, 32, 16.0)?;
    let sp = Spectral::new(grid);
    for gamma in [1.5, 2.5] {
        let mut pairs = Vec::new();
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let data = make_ill_prepared(&sp, &DataFamily::default(), PhysParams::new(eps, eps, 0.5, gamma)?, 0.05)?;
            let t = &data.table;
            println!(
                "gamma = {gamma} eps = {eps:<6} |rho-1| = {:.4e}  ratio = {:.4}  orlicz = {:.4}",
                t.rho_l2, t.rho_ratio, t.orlicz_ratio
            );
            pairs.push((eps, t.rho_l2));
        }
        println!("gamma = {gamma}: slope {:.4}", fit_rate(&pairs)?.slope);
    }
    Ok(())
}
