use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::functionals::energy::{strain_sq, velocity_gradient};
use crate::functionals::params::PhysParams;
use crate::functionals::relative::relative_energy;
use crate::spectral::Spectral;

/// One time sample of the fluid and of the test pair.
///
/// Missing time derivatives are filled in by finite differences over the
/// sample sequence.
#[derive(Debug, Clone)]
pub struct BudgetFrame {
    pub t: f64,
    pub rho: ScalarField,
    pub u: VectorField,
    pub r: ScalarField,
    pub big_u: VectorField,
    pub dr_dt: Option<ScalarField>,
    pub du_dt: Option<VectorField>,
}

/// Spatial integrals of the five budget terms at one instant, plus the
/// relative energy and `∫ ϱ|Du|²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BudgetIntegrands {
    pub terms: [f64; 5],
    pub relative_energy: f64,
    pub strain: f64,
}

/// Cumulative budget at one checkpoint `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetRow {
    pub tau: f64,
    /// `I₁ … I₅` integrated over `[0, τ]`.
    pub terms: [f64; 5],
    /// `E(τ) - E(0) + ν ∫₀^τ ∫ ϱ|Du|²`.
    pub lhs: f64,
    pub rhs: f64,
    /// Estimated time-quadrature error of `rhs - lhs`.
    pub tol: f64,
    pub relative_energy: f64,
    /// `ν ∫₀^τ ∫ ϱ|Du|²`.
    pub viscous: f64,
}

impl BudgetRow {
    /// `rhs - lhs`.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.tol
    }
}

fn dot(a: &[ScalarField], b: &[ScalarField]) -> ScalarField {
    let grid = *a[0].grid();
    let mut out = vec![0.0; grid.len()];
    for (x, y) in a.iter().zip(b) {
        for (o, (p, q)) in out.iter_mut().zip(x.values().iter().zip(y.values())) {
            *o += p * q;
        }
    }
    ScalarField::new(grid, out).expect("sized by grid")
}

/// Evaluates the budget integrands for a frame whose time derivatives are known.
pub fn budget_integrands(
    sp: &Spectral,
    frame: &BudgetFrame,
    dr_dt: &ScalarField,
    du_dt: &VectorField,
    params: &PhysParams,
) -> Result<BudgetIntegrands> {
    let d = sp.grid().dim();
    let eos = params.eos();
    let k2 = 2.0 * params.kappa * params.kappa;
    let rho = &frame.rho;
    let u = &frame.u;
    let r = &frame.r;
    let uu = &frame.big_u;
    let diff = uu - u;
    let grad_uu = velocity_gradient(sp, uu);
    let grad_u = velocity_gradient(sp, u);

    // I1: ∂_t U · ϱ(U - u) + ϱ (u·∇)U · (U - u)
    let mut conv = Vec::with_capacity(d);
    for i in 0..d {
        let mut c = vec![0.0; rho.values().len()];
        for j in 0..d {
            for (o, (a, b)) in c.iter_mut().zip(u.comp(j).values().iter().zip(grad_uu[i][j].values())) {
                *o += a * b;
            }
        }
        conv.push(ScalarField::new(*sp.grid(), c)?);
    }
    let i1 = (&dot(du_dt.comps(), diff.comps()) + &dot(&conv, diff.comps()))
        .zip_map(rho, |a, p| a * p)
        .integral();

    // I2: 2κ² (ϱ ∂_tΔr + ϱu·∇Δr - ∂_t r Δr)
    let lap_r = sp.laplacian(r);
    let i2 = if k2 == 0.0 {
        0.0
    } else {
        let lap_dr = sp.laplacian(dr_dt);
        let grad_lap_r = sp.gradient(&lap_r);
        let a = &(rho * &lap_dr) + &(rho * &u.dot(&grad_lap_r));
        k2 * (&a - &(dr_dt * &lap_r)).integral()
    };

    // I3: -2κ² (∇ϱ·∇(ϱ div U) - ½|∇ϱ|² div U + ∇ϱ⊗∇ϱ : ∇U)
    let div_uu = {
        let mut s = ScalarField::zeros(*sp.grid());
        for (a, row) in grad_uu.iter().enumerate() {
            s = &s + &row[a];
        }
        s
    };
    let i3 = if k2 == 0.0 {
        0.0
    } else {
        let gr = sp.gradient(rho);
        let g_rdiv = sp.gradient(&(rho * &div_uu));
        let mut tens = vec![0.0; rho.values().len()];
        for i in 0..d {
            for j in 0..d {
                let gi = gr.comp(i).values();
                let gj = gr.comp(j).values();
                for (o, ((a, b), c)) in tens
                    .iter_mut()
                    .zip(gi.iter().zip(gj).zip(grad_uu[i][j].values()))
                {
                    *o += a * b * c;
                }
            }
        }
        let tens = ScalarField::new(*sp.grid(), tens)?;
        let a = &gr.dot(&g_rdiv) - &gr.norm_sq().zip_map(&div_uu, |g2, dv| 0.5 * g2 * dv);
        -k2 * (&a + &tens).integral()
    };

    // I4: 2ν ϱ Du : ∇U
    let i4 = if params.nu == 0.0 {
        0.0
    } else {
        let mut c = vec![0.0; rho.values().len()];
        for i in 0..d {
            for j in 0..d {
                let a = grad_u[i][j].values();
                let b = grad_u[j][i].values();
                let w = grad_uu[i][j].values();
                for (o, ((x, y), z)) in c.iter_mut().zip(a.iter().zip(b).zip(w)) {
                    *o += 0.5 * (x + y) * z;
                }
            }
        }
        2.0 * params.nu * (rho * &ScalarField::new(*sp.grid(), c)?).integral()
    };

    // I5: -ε⁻² (∂_t H'(r) (ϱ - r) + ϱu·∇H'(r) + p(ϱ) div U)
    let h1 = r.map(|x| eos.h_prime(x));
    let dh1 = dr_dt.zip_map(r, |dr, x| eos.h_second(x) * dr);
    let gh1 = sp.gradient(&h1);
    let p1 = eos.pressure(1.0);
    let a = &(&dh1 * &(rho - r)) + &(rho * &u.dot(&gh1));
    let b = rho.map(|x| eos.pressure(x) - p1);
    let i5 = -(&a + &(&b * &div_uu)).integral() / (params.eps * params.eps);

    let rel = relative_energy(sp, rho, u, r, uu, params)?.total();
    let strain = (rho * &strain_sq(&grad_u)).integral();
    Ok(BudgetIntegrands {
        terms: [i1, i2, i3, i4, i5],
        relative_energy: rel,
        strain,
    })
}

fn central_difference<T: Clone>(
    items: &[T],
    times: &[f64],
    k: usize,
    comb: impl Fn(&[(f64, &T)]) -> T,
) -> T {
    let n = items.len();
    if k == 0 {
        let (h1, h2) = (times[1] - times[0], times[2] - times[0]);
        // second-order one-sided weights for nonuniform spacing
        let w1 = h2 / (h1 * (h2 - h1));
        let w2 = -h1 / (h2 * (h2 - h1));
        let w0 = -(w1 + w2);
        comb(&[(w0, &items[0]), (w1, &items[1]), (w2, &items[2])])
    } else if k == n - 1 {
        let (h1, h2) = (times[n - 2] - times[n - 1], times[n - 3] - times[n - 1]);
        let w1 = h2 / (h1 * (h2 - h1));
        let w2 = -h1 / (h2 * (h2 - h1));
        let w0 = -(w1 + w2);
        comb(&[(w0, &items[n - 1]), (w1, &items[n - 2]), (w2, &items[n - 3])])
    } else {
        let (hm, hp) = (times[k] - times[k - 1], times[k + 1] - times[k]);
        let wm = -hp / (hm * (hm + hp));
        let wp = hm / (hp * (hm + hp));
        let w0 = -(wm + wp);
        comb(&[(wm, &items[k - 1]), (w0, &items[k]), (wp, &items[k + 1])])
    }
}

fn comb_scalar(parts: &[(f64, &ScalarField)]) -> ScalarField {
    let mut out = ScalarField::zeros(*parts[0].1.grid());
    for (w, f) in parts {
        out = &out + &f.scale(*w);
    }
    out
}

fn comb_vector(parts: &[(f64, &VectorField)]) -> VectorField {
    let mut out = VectorField::zeros(*parts[0].1.grid());
    for (w, f) in parts {
        out = &out + &f.scale(*w);
    }
    out
}

/// Cumulative trapezoid integrals of `g` at every sample.
/// Integral over `[t_j, t_{j+1}]` of the interpolant through the samples at
/// `lo..lo + width`, by three-point Gauss–Legendre (exact up to degree 5).
fn interval_integral(times: &[f64], g: &[f64], j: usize, lo: usize, width: usize) -> f64 {
    const NODES: [(f64, f64); 3] = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];
    let (a, b) = (times[j], times[j + 1]);
    let half = 0.5 * (b - a);
    NODES
        .iter()
        .map(|&(x, w)| {
            let t = a + half * (x + 1.0);
            let lagrange: f64 = (lo..lo + width)
                .map(|m| {
                    let basis: f64 = (lo..lo + width)
                        .filter(|&l| l != m)
                        .map(|l| (t - times[l]) / (times[m] - times[l]))
                        .product();
                    basis * g[m]
                })
                .sum();
            w * half * lagrange
        })
        .sum()
}

/// Cumulative integrals by piecewise interpolation on `width` samples around
/// each interval, clamped at the ends.
fn cumulative(times: &[f64], g: &[f64], width: usize) -> Vec<f64> {
    let n = g.len();
    let width = width.min(n);
    let mut out = vec![0.0; n];
    for j in 0..n.saturating_sub(1) {
        let lo = (j + 1).saturating_sub(width / 2).min(n - width);
        out[j + 1] = out[j] + interval_integral(times, g, j, lo, width);
    }
    out
}

/// Time integrals use the cubic rule; the quadratic rule supplies the error
/// estimate.
fn cumulative_integral(times: &[f64], g: &[f64]) -> Vec<f64> {
    cumulative(times, g, 4)
}

fn quadrature_tol(times: &[f64], g: &[f64], fine: &[f64]) -> Vec<f64> {
    let coarse = cumulative(times, g, 3);
    fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect()
}

/// Relative energy budget over a time-ordered frame sequence.
///
/// Returns one row per frame. The first row is the zero budget at `t₀`.
pub fn rei_budget(sp: &Spectral, frames: &[BudgetFrame], params: &PhysParams) -> Result<Vec<BudgetRow>> {
    if frames.is_empty() {
        return Err(Error::InsufficientData("budget needs at least one frame".into()));
    }
    let times: Vec<f64> = frames.iter().map(|f| f.t).collect();
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InsufficientData("frame times must increase strictly".into()));
    }
    let needs_fd = frames.iter().any(|f| f.dr_dt.is_none() || f.du_dt.is_none());
    if needs_fd && frames.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "time derivatives of the test pair are missing and {} frames are too few for finite differences",
            frames.len()
        )));
    }
    let rs: Vec<ScalarField> = frames.iter().map(|f| f.r.clone()).collect();
    let us: Vec<VectorField> = frames.iter().map(|f| f.big_u.clone()).collect();
    let mut ints = Vec::with_capacity(frames.len());
    for (k, f) in frames.iter().enumerate() {
        let dr = match &f.dr_dt {
            Some(d) => d.clone(),
            None => central_difference(&rs, &times, k, comb_scalar),
        };
        let du = match &f.du_dt {
            Some(d) => d.clone(),
            None => central_difference(&us, &times, k, comb_vector),
        };
        ints.push(budget_integrands(sp, f, &dr, &du, params)?);
    }
    Ok(budget_rows(&times, &ints, params.nu))
}

/// Cumulative budget rows from integrands sampled at strictly increasing `times`.
pub fn budget_rows(times: &[f64], ints: &[BudgetIntegrands], nu: f64) -> Vec<BudgetRow> {
    if ints.is_empty() {
        return Vec::new();
    }
    let sums: Vec<Vec<f64>> = (0..5)
        .map(|j| cumulative_integral(times, &ints.iter().map(|i| i.terms[j]).collect::<Vec<_>>()))
        .collect();
    let visc_g: Vec<f64> = ints.iter().map(|i| nu * i.strain).collect();
    let visc = cumulative_integral(times, &visc_g);
    let net_g: Vec<f64> = ints
        .iter()
        .map(|i| i.terms.iter().sum::<f64>() - nu * i.strain)
        .collect();
    let net = cumulative_integral(times, &net_g);
    let tol = quadrature_tol(times, &net_g, &net);
    let e0 = ints[0].relative_energy;
    (0..ints.len())
        .map(|k| {
            let terms = [sums[0][k], sums[1][k], sums[2][k], sums[3][k], sums[4][k]];
            BudgetRow {
                tau: times[k],
                terms,
                lhs: ints[k].relative_energy - e0 + visc[k],
                rhs: terms.iter().sum(),
                tol: tol[k],
                relative_energy: ints[k].relative_energy,
                viscous: visc[k],
            }
        })
        .collect()
}
