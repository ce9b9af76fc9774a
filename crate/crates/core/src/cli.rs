//! Command-line front end shared by the `nsk` binary and the tests.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::acoustic::{
    dispersion_residual, strichartz_decay_experiment, AcousticParams, AcousticState, Coupling, DecayExperiment,
    Horizon,
};
use crate::error::{Error, Result};
use crate::euler;
use crate::functionals::{sobolev_norm, NormSpec};
use crate::harness::{fit_rate, make_ill_prepared, mollify, mollify_vec, run_sweep, RateFit};
use crate::io::report::{rates_json, summary_lines, sweep_detail_json, sweep_rates, sweep_table, write_text};
use crate::io::{read_snapshot, write_snapshot, RateSummary, RunConfig, Snapshot, Table};
use crate::nsk::{simulate, SimConfig};
use crate::spectral::Spectral;

#[derive(Debug, Parser)]
#[command(name = "nsk", about = "Capillary fluid solver and low-Mach limit harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// `key=value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set epsilon=0.05`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the capillary Navier–Stokes system from generated data.
    Simulate(Common),
    /// Space-time norms of acoustic waves against ε.
    AcousticDecay(Common),
    /// ε-sweep of the low-Mach limit.
    LimitSweep(Common),
    /// Residual of the dispersion relation against Δt.
    DispersionCheck(Common),
    /// Norms of every field in a snapshot.
    Norms(Common),
    /// Incompressible Euler reference run.
    Euler(Common),
}

fn load(c: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(c.config.as_deref(), &c.overrides)?;
    if let Some(o) = &c.out {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

/// Caps the global thread pool at `NSK_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("NSK_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::config("NSK_THREADS", format!("expected a positive integer, got `{v}`")))?;
        // a pool built earlier in the same process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn warn_excluded(metric: &str, fit: &RateFit) {
    for (e, v) in &fit.excluded {
        eprintln!("warning: {metric}: dropped nonpositive value {v:e} at epsilon {e}");
    }
}

fn cmd_simulate(cfg: &RunConfig) -> Result<()> {
    let grid = cfg.grid()?;
    let sp = Spectral::new(grid);
    let p = cfg.phys_params(cfg.epsilon)?;
    let data = make_ill_prepared(&sp, &cfg.family()?, p, cfg.rho_min)?;
    let sim = SimConfig { t_end: cfg.t_end, dt: cfg.dt, stride: cfg.stride, step: cfg.step_config() };
    let (traj, audit) = simulate(&sp, &data.state, &sim)?;
    let mut t = Table::new(&["t", "mass", "energy", "bd_entropy", "dissipation", "min_rho"]);
    for (s, d) in traj.states.iter().zip(&traj.diagnostics) {
        t.push(vec![s.t, d.mass, d.energy, d.bd_entropy, d.dissipation, d.min_rho]);
    }
    let dir = &cfg.output_dir;
    write_text(dir, "diagnostics.csv", &t.to_csv())?;
    for (i, s) in traj.states.iter().enumerate() {
        write_snapshot(&dir.join(format!("snap_{i:04}.nsk")), &Snapshot::from_state(s))?;
    }
    let audit_json = serde_json::json!({
        "initial_energy": audit.initial_energy,
        "final_energy": audit.final_energy,
        "dissipation": audit.dissipation,
        "residual": audit.residual,
        "relative_residual": audit.relative_residual(),
        "max_excess": audit.max_excess,
        "bd_constant": audit.bd_constant,
        "steps": audit.steps,
        "dt": audit.dt,
    });
    write_text(dir, "energy_audit.json", &format!("{}\n", serde_json::to_string_pretty(&audit_json).unwrap_or_default()))?;
    print!(
        "{}",
        summary_lines(&[
            ("steps", audit.steps as f64),
            ("dt", audit.dt),
            ("energy_residual_rel", audit.relative_residual()),
            ("bd_constant", audit.bd_constant),
        ])
    );
    Ok(())
}

fn cmd_acoustic_decay(cfg: &RunConfig) -> Result<()> {
    let grid = cfg.grid()?;
    let sp = Spectral::new(grid);
    let fam = cfg.family()?;
    let s0 = mollify(&sp, &fam.density.sample(grid), cfg.delta)?;
    let m0 = mollify_vec(&sp, &sp.helmholtz_q(&fam.irrotational.sample(grid)), cfg.delta)?;
    let k_max = if cfg.decay_kmax > 0.0 { cfg.decay_kmax } else { 1.0 / cfg.delta };
    let exp = DecayExperiment {
        kappa: cfg.kappa,
        gamma: cfg.gamma,
        coupling: Coupling::Scaled,
        eps_list: cfg.epsilon_list.clone(),
        spec: NormSpec { p: cfg.norm_p, q: cfg.norm_q, s: cfg.norm_s, window: cfg.window()? },
        theta: (cfg.dimension == 2).then_some(cfg.theta),
        horizon: Horizon::EscapeWindow { k_max },
        samples: cfg.decay_samples,
    };
    let res = strichartz_decay_experiment(&sp, &s0, &m0, &exp)?;
    let mut t = Table::new(&["epsilon", "horizon", "norm"]);
    for r in &res.rows {
        t.push(vec![r.eps, r.horizon, r.norm]);
    }
    write_text(&cfg.output_dir, "decay.csv", &t.to_csv())?;
    let rates: Vec<RateSummary> = res.fit.iter().map(|f| RateSummary::new("strichartz", f)).collect();
    if let Some(f) = &res.fit {
        warn_excluded("strichartz", f);
        print!("{}", summary_lines(&[("slope", f.slope), ("residual", f.residual), ("alpha_max", res.admissibility.alpha_max)]));
    }
    write_text(&cfg.output_dir, "rates.json", &rates_json(&rates)?)?;
    Ok(())
}

fn cmd_limit_sweep(cfg: &RunConfig) -> Result<i32> {
    let res = run_sweep(&cfg.sweep_config()?)?;
    let dir = &cfg.output_dir;
    write_text(dir, "sweep.csv", &sweep_table(&res).to_csv())?;
    write_text(dir, "rates.json", &rates_json(&sweep_rates(&res))?)?;
    write_text(dir, "sweep_detail.json", &sweep_detail_json(&res)?)?;
    for f in &res.fits {
        warn_excluded(&f.metric, &f.fit);
    }
    for (e, msg, _) in &res.failures {
        eprintln!("member epsilon = {e} failed: {msg}");
    }
    print!("{}", sweep_table(&res).to_csv());
    Ok(res.failures.first().map_or(0, |f| f.2))
}

fn cmd_dispersion_check(cfg: &RunConfig) -> Result<()> {
    let grid = cfg.grid()?;
    let sp = Spectral::new(grid);
    let fam = cfg.family()?;
    let params = AcousticParams::new(cfg.epsilon, cfg.kappa, cfg.gamma)?;
    let s0 = mollify(&sp, &fam.density.sample(grid), cfg.delta)?;
    let m0 = mollify_vec(&sp, &sp.helmholtz_q(&fam.irrotational.sample(grid)), cfg.delta)?;
    let state = AcousticState::new(s0, m0, params)?;
    let k_max = (1.0 / cfg.delta).min(grid.dealias_cutoff() * (cfg.dimension as f64).sqrt());
    let base = 0.2 / params.omega(k_max);
    let t_eval = 0.5 * cfg.t_end;
    let mut t = Table::new(&["dt", "residual"]);
    let mut pairs = Vec::new();
    for i in 0..5 {
        let dt = base / 2f64.powi(i);
        let r = dispersion_residual(&sp, &state, t_eval, dt)?;
        t.push(vec![dt, r]);
        pairs.push((dt, r));
    }
    write_text(&cfg.output_dir, "dispersion.csv", &t.to_csv())?;
    let fit = fit_rate(&pairs)?;
    warn_excluded("dispersion_residual", &fit);
    write_text(&cfg.output_dir, "rates.json", &rates_json(&[RateSummary::new("dispersion_residual", &fit)])?)?;
    print!("{}", t.to_csv());
    print!("{}", summary_lines(&[("slope", fit.slope), ("residual", fit.residual)]));
    Ok(())
}

fn cmd_norms(cfg: &RunConfig) -> Result<()> {
    let path = cfg
        .snapshot
        .as_deref()
        .ok_or_else(|| Error::config("snapshot", "a snapshot path is required"))?;
    let snap = read_snapshot(path, None)?;
    let sp = Spectral::new(snap.grid);
    let window = crate::functionals::Window::centered(&snap.grid, cfg.window_fraction);
    let window = if cfg.window_fraction >= 1.0 { crate::functionals::Window::Global } else { window };
    let mut out = String::from("field,norm\n");
    for (name, f) in &snap.fields {
        let v = sobolev_norm(&sp, f, cfg.norm_s, cfg.norm_q, &window)?;
        out.push_str(&format!("{name},{v:.16e}\n"));
    }
    write_text(&cfg.output_dir, "norms.csv", &out)?;
    print!("{out}");
    Ok(())
}

fn cmd_euler(cfg: &RunConfig) -> Result<()> {
    let grid = cfg.grid()?;
    let sp = Spectral::new(grid);
    let fam = cfg.family()?;
    let u0 = fam.solenoidal.sample(grid).map_comps(|c| sp.dealias(c));
    let s0 = euler::project_initial(&sp, &u0)?;
    let n = cfg.stride.max(1);
    let times: Vec<f64> = (1..=n).map(|i| cfg.t_end * i as f64 / n as f64).collect();
    let dt = cfg.dt.unwrap_or(0.5 * euler::max_stable_dt(&sp, &s0.u));
    let traj = euler::euler_trajectory(&sp, &s0, &times, dt)?;
    let mut t = Table::new(&["t", "kinetic_energy", "divergence_ratio", "pressure_residual"]);
    for s in std::iter::once(&s0).chain(traj.iter()) {
        t.push(vec![s.t, s.kinetic_energy(), s.divergence_ratio(&sp), euler::pressure_residual(&sp, s)]);
    }
    write_text(&cfg.output_dir, "euler.csv", &t.to_csv())?;
    let last = traj.last().unwrap_or(&s0);
    let mut fields: Vec<(String, crate::ScalarField)> =
        last.u.comps().iter().enumerate().map(|(a, c)| (format!("u{a}"), c.clone())).collect();
    fields.push(("pi".into(), last.pi.clone()));
    let snap = Snapshot { grid, t: last.t, eps: 0.0, nu: 0.0, kappa: 0.0, gamma: cfg.gamma, fields };
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_snapshot(&cfg.output_dir.join("euler_final.nsk"), &snap)?;
    print!("{}", t.to_csv());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Simulate(c) => cmd_simulate(&load(&c)?).map(|_| 0),
        Command::AcousticDecay(c) => cmd_acoustic_decay(&load(&c)?).map(|_| 0),
        Command::LimitSweep(c) => cmd_limit_sweep(&load(&c)?),
        Command::DispersionCheck(c) => cmd_dispersion_check(&load(&c)?).map(|_| 0),
        Command::Norms(c) => cmd_norms(&load(&c)?).map(|_| 0),
        Command::Euler(c) => cmd_euler(&load(&c)?).map(|_| 0),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Convenience for tests: runs with `--out dir` appended.
pub fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut v: Vec<OsString> = vec!["nsk".into()];
    v.extend(args.iter().map(OsString::from));
    v.push("--out".into());
    v.push(dir.as_os_str().to_owned());
    run(v)
}
