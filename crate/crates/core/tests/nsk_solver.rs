use nsk_limit::acoustic::{multiplier_phi, AcousticParams};
use nsk_limit::functionals::HNormalization;
use nsk_limit::nsk::*;
use nsk_limit::*;
use std::f64::consts::PI;

fn grid(n: usize) -> (Grid, Spectral) {
    let g = Grid::new(2, n, 2.0 * PI).unwrap();
    (g, Spectral::new(g))
}

#[test]
fn pressure_examples() {
    let g = Grid::new(2, 8, 1.0).unwrap();
    let one = pressure(&ScalarField::constant(g, 1.0), 2.0).unwrap();
    assert!(one.values().iter().all(|&v| v == 1.0));
    let p = pressure(&ScalarField::constant(g, 1.5), 2.0).unwrap();
    assert!((p.values()[0] - 2.25).abs() < 1e-15);
    let p = pressure(&ScalarField::constant(g, 2.0), 1.4).unwrap();
    assert!((p.values()[0] - 2.639015822).abs() < 1e-9);
    assert!(matches!(
        pressure(&ScalarField::constant(g, 0.0), 2.0),
        Err(Error::Domain(_))
    ));
}

/// Fields depending on `x` only: `ϱ = exp(b sin x)`, `u = (c cos x, d sin x)`.
struct Profile {
    b: f64,
    c: f64,
    d: f64,
}

impl Profile {
    fn state(&self, g: Grid, p: PhysParams) -> FluidState {
        let (b, c, d) = (self.b, self.c, self.d);
        let rho = ScalarField::from_fn(g, |x| (b * x[0].sin()).exp());
        let u = VectorField::from_fn(g, |x| [c * x[0].cos(), d * x[0].sin(), 0.0]);
        FluidState::new(rho, u, p, 0.0).unwrap()
    }

    /// Hand-differentiated momentum tendency.
    fn exact(&self, x: f64, p: &PhysParams) -> [f64; 2] {
        let (b, c, d) = (self.b, self.c, self.d);
        let (sn, cs) = x.sin_cos();
        let (s1, s2, s3) = (b * cs, -b * sn, -b * cs);
        let r = (b * sn).exp();
        let r1 = r * s1;
        let r3 = r * (s3 + 3.0 * s1 * s2 + s1 * s1 * s1);
        let (f, f1, f2) = (c * cs, -c * sn, -c * cs);
        let (gg, g1, g2) = (d * sn, d * cs, -d * sn);
        let conv1 = r1 * f * f + 2.0 * r * f * f1;
        let conv2 = r1 * f * gg + r * f1 * gg + r * f * g1;
        let dp = p.gamma * r.powf(p.gamma) * s1;
        let visc1 = 2.0 * p.nu * (r1 * f1 + r * f2);
        let visc2 = p.nu * (r1 * g1 + r * g2);
        let cap = 2.0 * p.kappa * p.kappa * r * r3;
        [
            -conv1 - dp / (p.eps * p.eps) + visc1 + cap,
            -conv2 + visc2,
        ]
    }
}

#[test]
fn manufactured_tendency_converges_spectrally() {
    let prof = Profile { b: 0.4, c: 0.7, d: -0.5 };
    let p = PhysParams::new(0.7, 0.05, 0.3, 1.6).unwrap();
    let mut errs = Vec::new();
    for n in [8, 16, 32, 64] {
        let (g, sp) = grid(n);
        let rhs = momentum_rhs(&sp, &prof.state(g, p)).unwrap();
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..g.len() {
            let e = prof.exact(g.position(i)[0], &p);
            for a in 0..2 {
                err = err.max((rhs.comp(a).values()[i] - e[a]).abs());
                scale = scale.max(e[a].abs());
            }
        }
        errs.push(err / scale);
    }
    for w in errs.windows(2) {
        assert!(w[1] < 0.1 * w[0] || w[1] < 1e-12, "{errs:?}");
    }
    assert!(errs[3] < 1e-11, "{errs:?}");
}

#[test]
fn inviscid_tendency_matches_finite_differences() {
    let prof = Profile { b: 0.3, c: 0.6, d: 0.0 };
    let p = PhysParams::new(0.5, 0.0, 0.0, 2.0).unwrap();
    let mut errs = Vec::new();
    for n in [64, 128] {
        let (g, sp) = grid(n);
        let st = prof.state(g, p);
        let rhs = momentum_rhs(&sp, &st).unwrap();
        // flux F = ϱu² + p/ε² along x, sixth-order centred difference
        let h = g.spacing();
        let flux: Vec<f64> = (0..n)
            .map(|i| {
                let idx = g.index([i, 0, 0]);
                let r = st.rho.values()[idx];
                let u = st.u.comp(0).values()[idx];
                r * u * u + r.powf(p.gamma) / (p.eps * p.eps)
            })
            .collect();
        let w = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..n {
            let mut df = 0.0;
            for (j, wj) in w.iter().enumerate() {
                df += wj * flux[(i + n + j - 3) % n];
            }
            let fd = -df / h;
            let sp_val = rhs.comp(0).values()[g.index([i, 0, 0])];
            err = err.max((fd - sp_val).abs());
            scale = scale.max(fd.abs());
        }
        errs.push(err / scale);
    }
    assert!(errs[0] < 1e-5, "{errs:?}");
    assert!(errs[1] < errs[0] / 32.0, "{errs:?}");
}

#[test]
fn equilibrium_is_a_fixed_point() {
    let (g, sp) = grid(16);
    let st = FluidState::equilibrium(g, PhysParams::new(0.1, 0.1, 0.5, 2.0).unwrap());
    let next = step(&sp, &st, 0.01, StepConfig::default()).unwrap();
    assert!((&next.rho - &st.rho).max_abs() < 1e-14);
    assert!(next.u.max_magnitude() < 1e-14);
    let (traj, audit) = simulate(&sp, &st, &SimConfig::new(0.1, 2).with_dt(0.01)).unwrap();
    let d0 = traj.diagnostics[0];
    for d in &traj.diagnostics {
        assert!((d.mass - d0.mass).abs() < 1e-12 * d0.mass);
        assert!(d.energy.abs() < 1e-14 && d.dissipation == 0.0);
    }
    assert_eq!(audit.steps, 10);
}

/// Period of `ϱ̂_k(t)` from the first and last upward zero crossings.
fn measured_frequency(p: PhysParams, k: usize, dt: f64, periods: f64) -> (f64, f64) {
    let (g, sp) = grid(16);
    let amp = 1e-5;
    let rho = ScalarField::from_fn(g, |x| 1.0 + amp * (k as f64 * x[0]).cos());
    let st = FluidState::new(rho, VectorField::zeros(g), p, 0.0).unwrap();
    let expect = AcousticParams::linearized_from(&p).omega(k as f64);
    let steps = (periods * 2.0 * PI / expect / dt).ceil() as usize;
    let mut solver = NskSolver::new(&sp, &st, StepConfig::default()).unwrap();
    let probe = |s: &NskSolver| {
        let r = s.state().unwrap().rho;
        let mut acc = 0.0;
        for i in 0..g.len() {
            acc += (r.values()[i] - 1.0) * (k as f64 * g.position(i)[0]).cos();
        }
        acc
    };
    let mut crossings = Vec::new();
    let mut prev = probe(&solver);
    for _ in 0..steps {
        let t0 = solver.time();
        solver.step(dt).unwrap();
        let cur = probe(&solver);
        if prev < 0.0 && cur >= 0.0 {
            crossings.push(t0 + dt * prev / (prev - cur));
        }
        prev = cur;
    }
    let n = crossings.len();
    assert!(n >= 3);
    let omega = 2.0 * PI * (n - 1) as f64 / (crossings[n - 1] - crossings[0]);
    (omega, expect)
}

#[test]
fn small_mode_oscillates_at_linear_frequency() {
    let p = PhysParams::new(0.5, 0.0, 0.5, 2.0).unwrap();
    let (w, expect) = measured_frequency(p, 2, 1e-3, 8.0);
    assert!((w / expect - 1.0).abs() < 1e-3, "{w} vs {expect}");
}

#[test]
fn unit_normalized_mode_matches_phi() {
    let p = PhysParams::new(0.5, 0.0, 0.5, 2.0)
        .unwrap()
        .with_normalization(HNormalization::Unit);
    let (w, _) = measured_frequency(p, 3, 1e-3, 8.0);
    let phi = multiplier_phi(3.0, 0.5, 0.5).unwrap();
    assert!((w / phi - 1.0).abs() < 1e-3, "{w} vs {phi}");
}

fn smooth_state(g: Grid, p: PhysParams) -> FluidState {
    let rho = ScalarField::from_fn(g, |x| {
        1.0 + 0.2 * x[0].cos() * x[1].sin() + 0.1 * (2.0 * x[1] + x[0]).sin()
    });
    let u = VectorField::from_fn(g, |x| {
        [
            -0.5 * x[0].cos() * x[1].sin() + 0.2 * x[1].sin(),
            0.5 * x[0].sin() * x[1].cos(),
            0.0,
        ]
    });
    FluidState::new(rho, u, p, 0.0).unwrap()
}

#[test]
fn temporal_order_at_least_two() {
    let (g, sp) = grid(32);
    let p = PhysParams::new(0.5, 0.02, 0.3, 2.0).unwrap();
    let st = smooth_state(g, p);
    let run = |dt: f64| {
        let (tr, _) = simulate(&sp, &st, &SimConfig::new(0.2, 1000).with_dt(dt)).unwrap();
        tr.last().unwrap().clone()
    };
    let dt0 = NskSolver::new(&sp, &st, StepConfig::default()).unwrap().max_stable_dt().unwrap();
    let dt0 = 0.2 / (0.2 / dt0).ceil();
    let a = run(dt0);
    let b = run(dt0 / 2.0);
    let c = run(dt0 / 4.0);
    let e1 = (&a.rho - &b.rho).l2_norm() + (&a.u - &b.u).l2_norm();
    let e2 = (&b.rho - &c.rho).l2_norm() + (&b.u - &c.u).l2_norm();
    let order = (e1 / e2).log2();
    assert!(order >= 2.0, "order {order} ({e1:e}, {e2:e})");
}

#[test]
fn mass_conserved_and_energy_balanced() {
    let (g, sp) = grid(32);
    let p = PhysParams::new(0.5, 0.02, 0.3, 2.0).unwrap();
    let st = smooth_state(g, p);
    let (tr, audit) = simulate(&sp, &st, &SimConfig::new(0.5, 50).with_dt(2e-3)).unwrap();
    let m0 = tr.diagnostics[0].mass;
    for d in &tr.diagnostics {
        assert!((d.mass - m0).abs() <= 1e-12 * m0);
    }
    assert!(audit.relative_residual() < 1e-6, "{audit:?}");
    assert!(audit.monotone(1e-6));
    assert!(audit.dissipation > 0.0);
    assert!(audit.bd_constant.is_finite() && audit.bd_constant >= 1.0 - 1e-9);
}

#[test]
fn inviscid_capillary_run_conserves_energy() {
    let (g, sp) = grid(32);
    let p = PhysParams::new(0.5, 0.0, 0.3, 2.0).unwrap();
    let st = smooth_state(g, p);
    let (_, audit) = simulate(&sp, &st, &SimConfig::new(0.5, 1000).with_dt(2e-3)).unwrap();
    assert_eq!(audit.dissipation, 0.0);
    assert!(audit.relative_residual() < 1e-6, "{audit:?}");
}

#[test]
fn aborts_on_cfl_and_density_floor() {
    let (g, sp) = grid(32);
    let p = PhysParams::new(0.5, 0.02, 0.3, 2.0).unwrap();
    let st = smooth_state(g, p);
    let mut s = NskSolver::new(&sp, &st, StepConfig::default()).unwrap();
    let dt = s.max_stable_dt().unwrap();
    let e = s.step(2.0 * dt).unwrap_err();
    assert!(matches!(e, Error::NumericalAbort(_)) && e.exit_code() == 1);
    let low = FluidState::new(st.rho.map(|r| r - 0.9), st.u.clone(), p, 0.0).unwrap();
    let e = NskSolver::new(&sp, &low, StepConfig::default()).err().unwrap();
    assert!(e.to_string().contains("below floor"), "{e}");
}
