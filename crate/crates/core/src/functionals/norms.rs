use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;
use crate::spectral::Spectral;

/// Region over which a spatial norm is accumulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Global,
    /// Axis-aligned box `[lo, hi)` in physical coordinates.
    SubBox { lo: [f64; 3], hi: [f64; 3] },
}

impl Window {
    /// Box of side `fraction · L` centred in the domain.
    pub fn centered(grid: &Grid, fraction: f64) -> Self {
        let l = grid.length();
        let half = 0.5 * fraction * l;
        let c = 0.5 * l;
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for a in 0..3 {
            if a < grid.dim() {
                lo[a] = c - half;
                hi[a] = c + half;
            } else {
                hi[a] = 1.0;
            }
        }
        Window::SubBox { lo, hi }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if let Window::SubBox { lo, hi } = self {
            for a in 0..grid.dim() {
                if !(lo[a] >= 0.0 && hi[a] <= grid.length() && lo[a] < hi[a]) {
                    return Err(Error::config(
                        "window",
                        format!("axis {a}: [{}, {}) not inside [0, {}]", lo[a], hi[a], grid.length()),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, grid: &Grid, idx: usize) -> bool {
        match self {
            Window::Global => true,
            Window::SubBox { lo, hi } => {
                let x = grid.position(idx);
                (0..grid.dim()).all(|a| x[a] >= lo[a] && x[a] < hi[a])
            }
        }
    }

    /// Flat indices inside the window, ascending.
    pub fn indices(&self, grid: &Grid) -> Vec<usize> {
        (0..grid.len()).filter(|&i| self.contains(grid, i)).collect()
    }

    /// Distance from the window to the boundary of the periodic cell.
    pub fn distance_to_boundary(&self, grid: &Grid) -> f64 {
        match self {
            Window::Global => 0.0,
            Window::SubBox { lo, hi } => (0..grid.dim())
                .map(|a| lo[a].min(grid.length() - hi[a]))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Space-time norm specification `L^p(0,T; W^{s,q}(window))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    /// Time exponent.
    pub p: f64,
    /// Space exponent.
    pub q: f64,
    /// Smoothness order.
    pub s: f64,
    pub window: Window,
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v >= 1.0 || v == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} must lie in [1, ∞]")))
    }
}

/// `L^q` norm of the pointwise Euclidean magnitude of `comps` over `window`.
pub fn lebesgue_norm_multi(comps: &[&ScalarField], q: f64, window: &Window) -> Result<f64> {
    check_exponent("q", q)?;
    let grid = *comps[0].grid();
    for c in comps {
        c.check_grid(&grid)?;
    }
    window.validate(&grid)?;
    let mag = |i: usize| -> f64 {
        if comps.len() == 1 {
            comps[0].values()[i].abs()
        } else {
            comps.iter().map(|c| c.values()[i].powi(2)).sum::<f64>().sqrt()
        }
    };
    let idx: Box<dyn Iterator<Item = usize>> = match window {
        Window::Global => Box::new(0..grid.len()),
        w => Box::new(w.indices(&grid).into_iter()),
    };
    if q.is_infinite() {
        return Ok(idx.map(mag).fold(0.0, f64::max));
    }
    let mut acc = 0.0;
    if q == 2.0 {
        for i in idx {
            let m = mag(i);
            acc += m * m;
        }
        Ok((acc * grid.cell_volume()).sqrt())
    } else {
        for i in idx {
            acc += mag(i).powf(q);
        }
        Ok((acc * grid.cell_volume()).powf(1.0 / q))
    }
}

pub fn lebesgue_norm(f: &ScalarField, q: f64, window: &Window) -> Result<f64> {
    lebesgue_norm_multi(&[f], q, window)
}

/// `‖(1 - Δ)^{s/2} f‖_{L^q(window)}`.
pub fn sobolev_norm(sp: &Spectral, f: &ScalarField, s: f64, q: f64, window: &Window) -> Result<f64> {
    f.check_grid(sp.grid())?;
    if s == 0.0 {
        return lebesgue_norm(f, q, window);
    }
    lebesgue_norm(&sp.bessel_filter(f, s), q, window)
}

/// Sobolev norm of the pointwise magnitude of several components.
pub fn sobolev_norm_multi(
    sp: &Spectral,
    comps: &[&ScalarField],
    s: f64,
    q: f64,
    window: &Window,
) -> Result<f64> {
    if s == 0.0 {
        return lebesgue_norm_multi(comps, q, window);
    }
    let filtered: Vec<ScalarField> = comps.iter().map(|c| sp.bessel_filter(c, s)).collect();
    let refs: Vec<&ScalarField> = filtered.iter().collect();
    lebesgue_norm_multi(&refs, q, window)
}

/// `(∫ v(t)^p dt)^{1/p}` by the composite trapezoid rule; `p = ∞` takes the maximum.
pub fn time_norm(times: &[f64], values: &[f64], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    if times.len() != values.len() {
        return Err(Error::InsufficientData(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "time norm needs at least 2 snapshots, got {}",
            times.len()
        )));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |a, &b| a.max(b.abs())));
    }
    let mut acc = 0.0;
    for w in 0..times.len() - 1 {
        let dt = times[w + 1] - times[w];
        acc += 0.5 * dt * (values[w].abs().powf(p) + values[w + 1].abs().powf(p));
    }
    Ok(acc.powf(1.0 / p))
}

/// Space-time norm of a trajectory of multi-component frames.
pub fn strichartz_norm(
    sp: &Spectral,
    times: &[f64],
    frames: &[Vec<ScalarField>],
    spec: &NormSpec,
) -> Result<f64> {
    if frames.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "space-time norm needs at least 2 snapshots, got {}",
            frames.len()
        )));
    }
    let vals = frames
        .iter()
        .map(|f| {
            let refs: Vec<&ScalarField> = f.iter().collect();
            sobolev_norm_multi(sp, &refs, spec.s, spec.q, &spec.window)
        })
        .collect::<Result<Vec<f64>>>()?;
    time_norm(times, &vals, spec.p)
}

/// Both sides of `‖f‖_{L^p} ≤ ‖∇f‖_{L²} |supp f|^{1/p}` on a 2D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub support_measure: f64,
    pub holds: bool,
}

/// Points with `|f| > SUPPORT_THRESHOLD` count toward the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

pub fn support_inequality_check(sp: &Spectral, f: &ScalarField, p: f64) -> Result<SupportCheck> {
    if f.grid().dim() != 2 {
        return Err(Error::Domain(format!(
            "support inequality is two-dimensional, grid has d = {}",
            f.grid().dim()
        )));
    }
    f.check_grid(sp.grid())?;
    let lhs = lebesgue_norm(f, p, &Window::Global)?;
    let grad = sp.gradient(f);
    let g2 = lebesgue_norm_multi(&[grad.comp(0), grad.comp(1)], 2.0, &Window::Global)?;
    let count = f.values().iter().filter(|v| v.abs() > SUPPORT_THRESHOLD).count();
    let measure = count as f64 * f.grid().cell_volume();
    let rhs = if p.is_infinite() { g2 } else { g2 * measure.powf(1.0 / p) };
    Ok(SupportCheck {
        lhs,
        rhs,
        support_measure: measure,
        holds: lhs <= rhs * (1.0 + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_constant_norm() {
        let g = Grid::new(3, 8, 2.0 * PI).unwrap();
        let n = lebesgue_norm(&ScalarField::constant(g, 1.0), 2.0, &Window::Global).unwrap();
        assert!((n - (2.0 * PI).powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn cosine_norm() {
        let g = Grid::new(3, 16, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(g, |x| x[0].cos());
        let n = lebesgue_norm(&f, 2.0, &Window::Global).unwrap();
        let expect = (0.5 * (2.0 * PI).powi(3)).sqrt();
        assert!((n - expect).abs() < 1e-12);
        let sp = Spectral::new(g);
        assert_eq!(sobolev_norm(&sp, &f, 0.0, 2.0, &Window::Global).unwrap(), n);
        assert!((lebesgue_norm(&f, f64::INFINITY, &Window::Global).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn window_restricts_quadrature() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        let w = Window::centered(&g, 0.5);
        assert_eq!(w.indices(&g).len(), 64);
        let n = lebesgue_norm(&ScalarField::constant(g, 1.0), 2.0, &w).unwrap();
        assert!((n - 2.0).abs() < 1e-14);
        assert!((w.distance_to_boundary(&g) - 1.0).abs() < 1e-15);
        let bad = Window::SubBox { lo: [-1.0, 0.0, 0.0], hi: [1.0, 1.0, 1.0] };
        assert!(lebesgue_norm(&ScalarField::constant(g, 1.0), 2.0, &bad).is_err());
    }

    #[test]
    fn time_norm_cases() {
        let t: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let c = vec![3.0; 11];
        assert!((time_norm(&t, &c, 2.0).unwrap() - 3.0).abs() < 1e-14);
        let ramp: Vec<f64> = t.clone();
        let v = time_norm(&t, &ramp, 2.0).unwrap();
        // trapezoid on t² overestimates by Δt²/6
        let exact = (1.0f64 / 3.0 + 0.01 / 6.0).sqrt();
        assert!((v - exact).abs() < 1e-14);
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 0.01);
        assert_eq!(time_norm(&t, &ramp, f64::INFINITY).unwrap(), 1.0);
        assert!(matches!(
            time_norm(&t[..1], &ramp[..1], 2.0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn support_inequality_cases() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let sp = Spectral::new(g);
        let z = support_inequality_check(&sp, &ScalarField::zeros(g), 2.0).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        assert!(z.holds);
        // compactly supported bump, exactly zero outside radius 2
        let bump = ScalarField::from_fn(g, |x| {
            let r2 = (x[0] - 4.0).powi(2) + (x[1] - 4.0).powi(2);
            if r2 < 4.0 {
                (1.0 - r2 / 4.0).powi(4)
            } else {
                0.0
            }
        });
        let b = support_inequality_check(&sp, &bump, 4.0).unwrap();
        assert!(b.holds && b.support_measure < 4.0 * PI * 1.1);
        let full = ScalarField::from_fn(g, |x| (2.0 * PI * x[0] / 8.0).sin() + 0.5 * (2.0 * PI * x[1] / 8.0).cos());
        let f = support_inequality_check(&sp, &full, 2.0).unwrap();
        assert!(f.holds);
        let g3 = Grid::new(3, 8, 1.0).unwrap();
        assert!(support_inequality_check(&Spectral::new(g3), &ScalarField::zeros(g3), 2.0).is_err());
    }
}
