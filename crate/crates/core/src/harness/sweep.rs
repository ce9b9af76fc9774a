use rayon::prelude::*;

use crate::acoustic::AcousticParams;
use crate::error::{Error, Result};
use crate::euler::{self, EulerState};
use crate::field::{ScalarField, VectorField};
use crate::functionals::{
    budget_integrands, budget_rows, lebesgue_norm_multi, planar_time_exponent, relative_energy,
    sobolev_norm, time_norm, BudgetFrame, BudgetIntegrands, BudgetRow, HNormalization, PhysParams, Window,
};
use crate::grid::Grid;
use crate::nsk::{NskSolver, StepConfig};
use crate::spectral::Spectral;

use super::ansatz::{acoustic_for, ansatz_pair};
use super::data::{make_ill_prepared, DataFamily, IllPrepared, DataRates};
use super::fit::{fit_rate, RateFit};

/// Viscosity law `ν = c εᵃ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuLaw {
    pub coeff: f64,
    pub exponent: f64,
}

impl Default for NuLaw {
    fn default() -> Self {
        NuLaw { coeff: 1.0, exponent: 1.0 }
    }
}

impl NuLaw {
    pub fn nu(&self, eps: f64) -> f64 {
        self.coeff * eps.powf(self.exponent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub n: usize,
    pub length: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub normalization: HNormalization,
    /// Strictly decreasing.
    pub eps_list: Vec<f64>,
    pub nu_law: NuLaw,
    pub t_end: f64,
    pub family: DataFamily,
    /// Side of the centred observation box as a fraction of `L`.
    pub window_fraction: f64,
    /// Sobolev order of the density error.
    pub sobolev_s: f64,
    /// Admissibility parameter of the planar space-time norm with `q = 6`.
    pub theta: f64,
    pub step: StepConfig,
    /// Fixed step; otherwise the step is the smaller of the CFL step and
    /// `phase_per_step / ω(k_data)`.
    pub dt: Option<f64>,
    pub phase_per_step: f64,
    /// Budget and norm samples every this many steps.
    pub sample_every: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dim: 2,
            n: 128,
            length: 64.0,
            gamma: 1.5,
            kappa: 0.5,
            normalization: HNormalization::Physical,
            eps_list: vec![0.2, 0.1, 0.05, 0.025],
            nu_law: NuLaw::default(),
            t_end: 1.0,
            family: DataFamily::default(),
            window_fraction: 0.25,
            sobolev_s: 0.5,
            theta: 0.85,
            step: StepConfig::default(),
            dt: None,
            phase_per_step: 0.5,
            sample_every: 1,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_list.is_empty() {
            return Err(Error::config("epsilon_list", "must not be empty"));
        }
        if self.eps_list.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::config("epsilon_list", "must be strictly decreasing"));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::config("t_end", "must be positive"));
        }
        if self.sample_every == 0 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if !(self.phase_per_step > 0.0) {
            return Err(Error::config("phase_per_step", "must be positive"));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction < 1.0) {
            return Err(Error::config("window_fraction", "must lie in (0, 1)"));
        }
        Grid::new(self.dim, self.n, self.length)?;
        for &e in &self.eps_list {
            self.params(e)?;
        }
        Ok(())
    }

    pub fn params(&self, eps: f64) -> Result<PhysParams> {
        Ok(PhysParams::new(eps, self.nu_law.nu(eps), self.kappa, self.gamma)?
            .with_normalization(self.normalization))
    }

    /// Time exponent paired with `q = 6`.
    pub fn strichartz_p(&self) -> f64 {
        if self.dim == 3 {
            2.0
        } else {
            planar_time_exponent(6.0, self.theta)
        }
    }
}

/// Measurements of one sweep member.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub nu: f64,
    /// `max_τ E(ϱ, u | r, U)` over the samples.
    pub sup_rel_energy: f64,
    pub initial_rel_energy: f64,
    /// `‖√ϱ u - u^E‖` in `L²(0,T; L²(K))`.
    pub l2loc_vel_err: f64,
    /// `‖((ϱ-1)/ε, Q(ϱu))‖` in `L^p(0,T; L⁶(K))`.
    pub strichartz_q6: f64,
    /// `max_τ ‖ϱ - 1‖_{H^s}`.
    pub rho_h_s_err: f64,
    /// `min_{τ>0} (rhs - lhs + tol)` of the budget.
    pub rei_slack: f64,
    /// Largest budget quadrature tolerance.
    pub max_budget_tol: f64,
    /// Ratio of `E(0)` to the initial-data distance.
    pub conv_id_constant: f64,
    /// Largest relative change of `E(ϱ, u | r, U)` between consecutive samples.
    pub max_sample_variation: f64,
    pub steps: usize,
    pub dt: f64,
    pub data_rates: DataRates,
}

impl SweepRow {
    pub fn budget_holds(&self) -> bool {
        self.rei_slack >= 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricFit {
    pub metric: String,
    pub fit: RateFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by decreasing `ε`.
    pub rows: Vec<SweepRow>,
    /// Members that aborted: `(ε, message, exit code)`.
    pub failures: Vec<(f64, String, i32)>,
    pub fits: Vec<MetricFit>,
}

/// Full output of one member, including the budget at every sample.
#[derive(Debug, Clone)]
pub struct MemberOutput {
    pub row: SweepRow,
    pub budget: Vec<BudgetRow>,
    pub times: Vec<f64>,
    pub rel_energy: Vec<f64>,
}

fn sqrt_rho_u(rho: &ScalarField, u: &VectorField) -> VectorField {
    u.mul_scalar(&rho.map(f64::sqrt))
}

/// Initial-data distance `‖√ϱ⁰(u⁰_ε-u⁰)‖² + κ²ε²‖∇(σ⁰_ε-s⁰_δ)‖² + ‖σ⁰_ε-s⁰_δ‖²`.
fn initial_distance(sp: &Spectral, data: &IllPrepared, p: &PhysParams) -> f64 {
    let st = &data.state;
    let du = sqrt_rho_u(&st.rho, &(&st.u - &data.u0)).l2_norm();
    let ds = &data.sigma - &data.s0_delta;
    let g = sp.gradient(&ds).l2_norm();
    du * du + p.kappa * p.kappa * p.eps * p.eps * g * g + ds.l2_norm().powi(2)
}

/// Runs one member and keeps every sample of the budget.
pub fn run_member(cfg: &SweepConfig, eps: f64) -> Result<MemberOutput> {
    let grid = Grid::new(cfg.dim, cfg.n, cfg.length)?;
    let sp = Spectral::new(grid);
    let p = cfg.params(eps)?;
    let data = make_ill_prepared(&sp, &cfg.family, p, cfg.step.rho_min)?;
    let acoustic = acoustic_for(&sp, &data, &p)?;
    let window = Window::centered(&grid, cfg.window_fraction);
    let mut solver = NskSolver::new(&sp, &data.state, cfg.step)?;
    let dt_target = match cfg.dt {
        Some(dt) => dt,
        None => {
            let k_data = (1.0 / cfg.family.delta).min(grid.dealias_cutoff() * (cfg.dim as f64).sqrt());
            let w = AcousticParams::linearized_from(&p).omega(k_data);
            (solver.max_stable_dt()? * 0.9).min(cfg.phase_per_step / w)
        }
    };
    let steps = (cfg.t_end / dt_target - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;

    let mut eul = euler::project_initial(&sp, &data.u_euler0)?;
    let mut times = Vec::new();
    let mut ints: Vec<BudgetIntegrands> = Vec::new();
    let mut vel = Vec::new();
    let mut strich = Vec::new();
    let mut rho_hs: f64 = 0.0;
    let q_strich = 6.0;

    let mut sample = |solver: &NskSolver, eul: &EulerState| -> Result<()> {
        let st = solver.state()?;
        let pair = ansatz_pair(&sp, eps, eul, &acoustic);
        let frame = BudgetFrame {
            t: st.t,
            rho: st.rho.clone(),
            u: st.u.clone(),
            r: pair.r,
            big_u: pair.big_u,
            dr_dt: None,
            du_dt: None,
        };
        ints.push(budget_integrands(&sp, &frame, &pair.dr_dt, &pair.du_dt, &p)?);
        times.push(st.t);
        let err = &sqrt_rho_u(&st.rho, &st.u) - &eul.u;
        vel.push(lebesgue_norm_multi(&err.comps().iter().collect::<Vec<_>>(), 2.0, &window)?);
        let fluct = st.rho.map(|r| r - 1.0);
        let qm = sp.helmholtz_q(&st.momentum());
        let sig = fluct.scale(1.0 / eps);
        let mut comps = vec![&sig];
        comps.extend(qm.comps().iter());
        strich.push(lebesgue_norm_multi(&comps, q_strich, &window)?);
        rho_hs = rho_hs.max(sobolev_norm(&sp, &fluct, cfg.sobolev_s, 2.0, &Window::Global)?);
        Ok(())
    };

    sample(&solver, &eul)?;
    let dt_euler = euler::max_stable_dt(&sp, &eul.u) * 0.5;
    for n in 1..=steps {
        solver.step(dt)?;
        if n % cfg.sample_every == 0 || n == steps {
            let t = solver.time();
            eul = euler::euler_trajectory(&sp, &eul, &[t], dt_euler)?.pop().expect("one sample");
            sample(&solver, &eul)?;
        }
    }

    let rel: Vec<f64> = ints.iter().map(|i| i.relative_energy).collect();
    let budget = budget_rows(&times, &ints, p.nu);
    let rei_slack = budget
        .iter()
        .skip(usize::from(budget.len() > 1))
        .map(|b| b.rhs - b.lhs + b.tol)
        .fold(f64::INFINITY, f64::min);
    let max_budget_tol = budget.iter().map(|b| b.tol).fold(0.0, f64::max);
    let sup_rel_energy = rel.iter().cloned().fold(0.0, f64::max);
    let max_sample_variation = rel
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / w[0].abs().max(w[1].abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let e0 = relative_energy(
        &sp,
        &data.state.rho,
        &data.state.u,
        &data.s0_delta.map(|s| 1.0 + eps * s),
        &(&data.u_euler0 + &data.grad_phi0),
        &p,
    )?
    .total();
    let dist = initial_distance(&sp, &data, &p);
    let row = SweepRow {
        eps,
        nu: p.nu,
        sup_rel_energy,
        initial_rel_energy: e0,
        l2loc_vel_err: time_norm(&times, &vel, 2.0)?,
        strichartz_q6: time_norm(&times, &strich, cfg.strichartz_p())?,
        rho_h_s_err: rho_hs,
        rei_slack,
        max_budget_tol,
        conv_id_constant: if dist > 0.0 { e0 / dist } else { 0.0 },
        max_sample_variation,
        steps,
        dt,
        data_rates: data.table.clone(),
    };
    Ok(MemberOutput { row, budget, times, rel_energy: rel })
}

/// Metrics fitted against `ε` when at least three members succeed.
pub const FIT_METRICS: [&str; 4] = ["sup_rel_energy", "l2loc_vel_err", "strichartz_q6", "rho_h_s_err"];

fn metric(row: &SweepRow, name: &str) -> f64 {
    match name {
        "sup_rel_energy" => row.sup_rel_energy,
        "l2loc_vel_err" => row.l2loc_vel_err,
        "strichartz_q6" => row.strichartz_q6,
        "rho_h_s_err" => row.rho_h_s_err,
        _ => f64::NAN,
    }
}

/// Runs every member in parallel; failed members are reported, not fatal.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let outs: Vec<(f64, Result<MemberOutput>)> = cfg
        .eps_list
        .par_iter()
        .map(|&e| (e, run_member(cfg, e)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (e, r) in outs {
        match r {
            Ok(m) => rows.push(m.row),
            Err(err) => failures.push((e, err.to_string(), err.exit_code())),
        }
    }
    let mut fits = Vec::new();
    if rows.len() >= 3 {
        for name in FIT_METRICS {
            let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, metric(r, name))).collect();
            if let Ok(fit) = fit_rate(&pairs) {
                fits.push(MetricFit { metric: name.to_string(), fit });
            }
        }
    }
    Ok(SweepResult { rows, failures, fits })
}
