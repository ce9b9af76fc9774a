//! A small low-Mach sweep with ν = ε; prints the per-member measurements and
//! the fitted rates.

use nsk_limit::harness::{run_sweep, SweepConfig};

fn main() -> nsk_limit::Result<()> {
    let cfg = SweepConfig {
        n: 64,
        length: 32.0,
        eps_list: vec![0.2, 0.1, 0.05],
        t_end: 0.5,
        ..SweepConfig::default()
    };
    let res = run_sweep(&cfg)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "eps", "sup E", "vel err", "H^s err", "slack");
    for r in &res.rows {
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.eps, r.sup_rel_energy, r.l2loc_vel_err, r.rho_h_s_err, r.rei_slack
        );
    }
    for f in &res.fits {
        println!("{:<16} slope {:.3}", f.metric, f.fit.slope);
    }
    Ok(())
}
