use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::functionals::{HNormalization, PhysParams, Window};
use crate::grid::Grid;
use crate::harness::{DataFamily, NuLaw, ScalarProfile, SweepConfig, VelocityProfile};
use crate::nsk::StepConfig;

/// Every setting of the command-line tools. Parsed from `key=value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dimension: usize,
    pub n: usize,
    pub length: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub normalization: HNormalization,
    pub epsilon: f64,
    pub epsilon_list: Vec<f64>,
    /// Fixed viscosity for single runs; `None` applies the law to `epsilon`.
    pub nu: Option<f64>,
    pub nu_coeff: f64,
    pub nu_exponent: f64,
    pub dt: Option<f64>,
    pub cfl: f64,
    pub rho_min: f64,
    pub t_end: f64,
    pub stride: usize,
    pub phase_per_step: f64,
    pub density_profile: String,
    pub density_amplitude: f64,
    pub velocity_profile: String,
    pub velocity_amplitude: f64,
    pub potential_profile: String,
    pub potential_amplitude: f64,
    pub profile_width: f64,
    pub delta: f64,
    pub corrector: f64,
    pub envelope: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub norm_p: f64,
    pub norm_q: f64,
    pub norm_s: f64,
    pub theta: f64,
    pub window_fraction: f64,
    pub sobolev_s: f64,
    pub decay_samples: usize,
    /// Largest wavenumber of the decay data; 0 means `1/δ`.
    pub decay_kmax: f64,
    pub snapshot: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        RunConfig {
            dimension: 2,
            n: 128,
            length: 64.0,
            gamma: sweep.gamma,
            kappa: sweep.kappa,
            normalization: HNormalization::Physical,
            epsilon: 0.1,
            epsilon_list: sweep.eps_list.clone(),
            nu: None,
            nu_coeff: 1.0,
            nu_exponent: 1.0,
            dt: None,
            cfl: 0.4,
            rho_min: 0.05,
            t_end: 1.0,
            stride: 10,
            phase_per_step: sweep.phase_per_step,
            density_profile: "gaussian".into(),
            density_amplitude: 1.0,
            velocity_profile: "vortex".into(),
            velocity_amplitude: 1.0,
            potential_profile: "source".into(),
            potential_amplitude: 0.5,
            profile_width: 2.5,
            delta: 1.0 / 6.0,
            corrector: 0.5,
            envelope: 5.0,
            seed: 7,
            output_dir: PathBuf::from("out"),
            norm_p: 2.0,
            norm_q: 2.0,
            norm_s: 0.0,
            theta: sweep.theta,
            window_fraction: 0.25,
            sobolev_s: 0.5,
            decay_samples: 41,
            decay_kmax: 0.0,
            snapshot: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::config(key, format!("expected a finite number, got `{v}`")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::config(key, format!("expected a nonnegative integer, got `{v}`")))
}

fn parse_opt(key: &str, v: &str) -> Result<Option<f64>> {
    if v == "auto" || v.is_empty() {
        Ok(None)
    } else {
        parse_f64(key, v).map(Some)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

impl RunConfig {
    /// Applies one `key=value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "dimension" => self.dimension = parse_usize(key, v)?,
            "n" => self.n = parse_usize(key, v)?,
            "length" => self.length = parse_f64(key, v)?,
            "gamma" => self.gamma = parse_f64(key, v)?,
            "kappa" => self.kappa = parse_f64(key, v)?,
            "normalization" => {
                self.normalization = match v {
                    "physical" => HNormalization::Physical,
                    "unit" => HNormalization::Unit,
                    _ => return Err(Error::config(key, format!("expected `physical` or `unit`, got `{v}`"))),
                }
            }
            "epsilon" => self.epsilon = parse_f64(key, v)?,
            "epsilon_list" => {
                self.epsilon_list = v
                    .split(',')
                    .map(|s| parse_f64(key, s.trim()))
                    .collect::<Result<Vec<_>>>()?
            }
            "nu" => self.nu = parse_opt(key, v)?,
            "nu_coeff" => self.nu_coeff = parse_f64(key, v)?,
            "nu_exponent" => self.nu_exponent = parse_f64(key, v)?,
            "dt" => self.dt = parse_opt(key, v)?,
            "cfl" => self.cfl = parse_f64(key, v)?,
            "rho_min" => self.rho_min = parse_f64(key, v)?,
            "t_end" => self.t_end = parse_f64(key, v)?,
            "stride" => self.stride = parse_usize(key, v)?,
            "phase_per_step" => self.phase_per_step = parse_f64(key, v)?,
            "density_profile" => self.density_profile = v.to_string(),
            "density_amplitude" => self.density_amplitude = parse_f64(key, v)?,
            "velocity_profile" => self.velocity_profile = v.to_string(),
            "velocity_amplitude" => self.velocity_amplitude = parse_f64(key, v)?,
            "potential_profile" => self.potential_profile = v.to_string(),
            "potential_amplitude" => self.potential_amplitude = parse_f64(key, v)?,
            "profile_width" => self.profile_width = parse_f64(key, v)?,
            "delta" => self.delta = parse_f64(key, v)?,
            "corrector" => self.corrector = parse_f64(key, v)?,
            "envelope" => self.envelope = parse_f64(key, v)?,
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| Error::config(key, format!("expected an unsigned integer, got `{v}`")))?
            }
            "output_dir" => self.output_dir = PathBuf::from(v),
            "norm_p" => self.norm_p = parse_f64(key, v)?,
            "norm_q" => self.norm_q = parse_f64(key, v)?,
            "norm_s" => self.norm_s = parse_f64(key, v)?,
            "theta" => self.theta = parse_f64(key, v)?,
            "window_fraction" => self.window_fraction = parse_f64(key, v)?,
            "sobolev_s" => self.sobolev_s = parse_f64(key, v)?,
            "decay_samples" => self.decay_samples = parse_usize(key, v)?,
            "decay_kmax" => self.decay_kmax = parse_f64(key, v)?,
            "snapshot" => self.snapshot = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Parses `key=value` lines; `#` starts a comment. The result is validated.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_lines(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_lines(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}", no + 1), format!("expected key=value, got `{line}`"))
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Reads a config file and applies `overrides` (`key=value`) on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)?;
            cfg.apply_lines(&text)?;
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::config(o.clone(), "override must be key=value"))?;
            cfg.set(k.trim(), v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.phys_params(self.epsilon)?;
        if self.epsilon_list.is_empty() {
            return Err(Error::config("epsilon_list", "must not be empty"));
        }
        if self.epsilon_list.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::config("epsilon_list", "must be strictly decreasing"));
        }
        for &e in &self.epsilon_list {
            if !(e > 0.0) {
                return Err(Error::config("epsilon_list", format!("entries must be positive, got {e}")));
            }
        }
        if !(self.nu_coeff >= 0.0) {
            return Err(Error::config("nu_coeff", "must be nonnegative"));
        }
        if !(self.nu_exponent > 0.0) {
            return Err(Error::config("nu_exponent", "must be positive"));
        }
        let positive = [
            ("cfl", self.cfl),
            ("rho_min", self.rho_min),
            ("t_end", self.t_end),
            ("phase_per_step", self.phase_per_step),
            ("profile_width", self.profile_width),
            ("delta", self.delta),
            ("envelope", self.envelope),
        ];
        for (k, v) in positive {
            if !(v > 0.0) {
                return Err(Error::config(k, format!("must be positive, got {v}")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(Error::config("dt", format!("must be positive, got {dt}")));
            }
        }
        if self.stride == 0 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if self.decay_samples < 2 {
            return Err(Error::config("decay_samples", "must be at least 2"));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction < 1.0) {
            return Err(Error::config("window_fraction", "must lie in (0, 1)"));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::config("theta", "must lie in (0, 1]"));
        }
        self.family()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dimension, self.n, self.length)
    }

    pub fn nu_law(&self) -> NuLaw {
        NuLaw { coeff: self.nu_coeff, exponent: self.nu_exponent }
    }

    /// Parameters at `eps`; the viscosity is `nu` if set, else the law.
    pub fn phys_params(&self, eps: f64) -> Result<PhysParams> {
        let nu = self.nu.unwrap_or_else(|| self.nu_law().nu(eps));
        Ok(PhysParams::new(eps, nu, self.kappa, self.gamma)?.with_normalization(self.normalization))
    }

    pub fn step_config(&self) -> StepConfig {
        StepConfig { cfl: self.cfl, rho_min: self.rho_min }
    }

    pub fn window(&self) -> Result<Window> {
        Ok(Window::centered(&self.grid()?, self.window_fraction))
    }

    pub fn family(&self) -> Result<DataFamily> {
        let w = self.profile_width;
        Ok(DataFamily {
            density: ScalarProfile::parse(&self.density_profile, self.density_amplitude, w)?,
            solenoidal: VelocityProfile::parse(&self.velocity_profile, self.velocity_amplitude, w)?,
            irrotational: VelocityProfile::parse(&self.potential_profile, self.potential_amplitude, w)
                .map_err(|_| Error::config("potential_profile", format!("unknown profile `{}`", self.potential_profile)))?,
            delta: self.delta,
            corrector: self.corrector,
            envelope: self.envelope,
            seed: self.seed,
        })
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        Ok(SweepConfig {
            dim: self.dimension,
            n: self.n,
            length: self.length,
            gamma: self.gamma,
            kappa: self.kappa,
            normalization: self.normalization,
            eps_list: self.epsilon_list.clone(),
            nu_law: self.nu_law(),
            t_end: self.t_end,
            family: self.family()?,
            window_fraction: self.window_fraction,
            sobolev_s: self.sobolev_s,
            theta: self.theta,
            step: self.step_config(),
            dt: self.dt,
            phase_per_step: self.phase_per_step,
            sample_every: 1,
        })
    }

    /// `key=value` text that parses back to `self`.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let list: Vec<String> = self.epsilon_list.iter().map(|e| e.to_string()).collect();
        let norm = match self.normalization {
            HNormalization::Physical => "physical",
            HNormalization::Unit => "unit",
        };
        let lines: Vec<(&str, String)> = vec![
            ("dimension", self.dimension.to_string()),
            ("n", self.n.to_string()),
            ("length", self.length.to_string()),
            ("gamma", self.gamma.to_string()),
            ("kappa", self.kappa.to_string()),
            ("normalization", norm.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("epsilon_list", list.join(",")),
            ("nu", fmt_opt(self.nu)),
            ("nu_coeff", self.nu_coeff.to_string()),
            ("nu_exponent", self.nu_exponent.to_string()),
            ("dt", fmt_opt(self.dt)),
            ("cfl", self.cfl.to_string()),
            ("rho_min", self.rho_min.to_string()),
            ("t_end", self.t_end.to_string()),
            ("stride", self.stride.to_string()),
            ("phase_per_step", self.phase_per_step.to_string()),
            ("density_profile", self.density_profile.clone()),
            ("density_amplitude", self.density_amplitude.to_string()),
            ("velocity_profile", self.velocity_profile.clone()),
            ("velocity_amplitude", self.velocity_amplitude.to_string()),
            ("potential_profile", self.potential_profile.clone()),
            ("potential_amplitude", self.potential_amplitude.to_string()),
            ("profile_width", self.profile_width.to_string()),
            ("delta", self.delta.to_string()),
            ("corrector", self.corrector.to_string()),
            ("envelope", self.envelope.to_string()),
            ("seed", self.seed.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
            ("norm_p", self.norm_p.to_string()),
            ("norm_q", self.norm_q.to_string()),
            ("norm_s", self.norm_s.to_string()),
            ("theta", self.theta.to_string()),
            ("window_fraction", self.window_fraction.to_string()),
            ("sobolev_s", self.sobolev_s.to_string()),
            ("decay_samples", self.decay_samples.to_string()),
            ("decay_kmax", self.decay_kmax.to_string()),
            (
                "snapshot",
                self.snapshot.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            ),
        ];
        for (k, v) in lines {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}
