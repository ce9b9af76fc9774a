use crate::acoustic::{AcousticEvolver, AcousticParams, AcousticState, Coupling};
use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::functionals::{admissible_check, strichartz_norm, Admissibility, NormSpec};
use crate::harness::fit::{fit_rate, RateFit};
use crate::harness::window::wave_escape_window;
use crate::spectral::Spectral;

/// Length of the time interval over which the space-time norm is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    /// Per-`ε` escape horizon for data band-limited to `|k| ≤ k_max`.
    EscapeWindow { k_max: f64 },
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayExperiment {
    pub kappa: f64,
    pub gamma: f64,
    pub coupling: Coupling,
    /// Strictly decreasing.
    pub eps_list: Vec<f64>,
    pub spec: NormSpec,
    /// Admissibility parameter for planar pairs.
    pub theta: Option<f64>,
    pub horizon: Horizon,
    /// Time samples per run, endpoints included.
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub eps: f64,
    pub horizon: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayResult {
    pub rows: Vec<DecayRow>,
    /// Present when at least three rows have positive norms.
    pub fit: Option<RateFit>,
    pub admissibility: Admissibility,
}

/// Space-time norms of `(s, ∇Φ)` for each `ε`, and the fitted power of `ε`.
///
/// The data `(s0, m0)` are the same for every `ε`; `m0` is used as given and
/// should be a gradient.
pub fn strichartz_decay_experiment(
    sp: &Spectral,
    s0: &ScalarField,
    m0: &VectorField,
    exp: &DecayExperiment,
) -> Result<DecayResult> {
    let d = sp.grid().dim();
    let adm = admissible_check(exp.spec.p, exp.spec.q, d, exp.theta);
    if !adm.admissible {
        return Err(Error::Domain(format!(
            "pair (p, q) = ({}, {}) is not admissible in d = {d}; α_max = {}",
            exp.spec.p, exp.spec.q, adm.alpha_max
        )));
    }
    if exp.samples < 2 {
        return Err(Error::InsufficientData("decay experiment needs at least 2 samples".into()));
    }
    if exp.eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::config("epsilon_list", "must be strictly decreasing"));
    }
    let mut rows = Vec::with_capacity(exp.eps_list.len());
    for &eps in &exp.eps_list {
        let params = AcousticParams::new(eps, exp.kappa, exp.gamma)?.with_coupling(exp.coupling);
        let horizon = match exp.horizon {
            Horizon::Fixed(t) => t,
            Horizon::EscapeWindow { k_max } => {
                wave_escape_window(sp.grid(), &params, k_max, &exp.spec.window)?.t_max
            }
        };
        let state = AcousticState::new(s0.clone(), m0.clone(), params)?;
        let ev = AcousticEvolver::new(sp, &state)?;
        let times: Vec<f64> = (0..exp.samples)
            .map(|i| horizon * i as f64 / (exp.samples - 1) as f64)
            .collect();
        let frames: Vec<Vec<ScalarField>> = times.iter().map(|&t| ev.at(t).components()).collect();
        let norm = strichartz_norm(sp, &times, &frames, &exp.spec)?;
        rows.push(DecayRow { eps, horizon, norm });
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, r.norm)).collect();
    let fit = fit_rate(&pairs).ok();
    Ok(DecayResult {
        rows,
        fit,
        admissibility: adm,
    })
}
