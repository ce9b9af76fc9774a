use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Scaling of pressure and internal energy.
///
/// `Physical` uses `p = ϱ^γ`, so `H''(1) = γ`. `Unit` divides both `p` and `H`
/// by `γ`, giving `H''(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HNormalization {
    #[default]
    Physical,
    Unit,
}

/// Barotropic equation of state `p = c ϱ^γ` with matching internal energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eos {
    pub gamma: f64,
    /// Multiplier `c` on pressure and internal energy.
    pub scale: f64,
}

impl Eos {
    pub fn new(gamma: f64, normalization: HNormalization) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::config("gamma", format!("must exceed 1, got {gamma}")));
        }
        let scale = match normalization {
            HNormalization::Physical => 1.0,
            HNormalization::Unit => 1.0 / gamma,
        };
        Ok(Eos { gamma, scale })
    }

    pub fn pressure(&self, r: f64) -> f64 {
        self.scale * r.powf(self.gamma)
    }

    /// `H(r) = c (r^γ - 1 - γ(r - 1)) / (γ - 1)`.
    pub fn h(&self, r: f64) -> f64 {
        let g = self.gamma;
        self.scale * (r.powf(g) - 1.0 - g * (r - 1.0)) / (g - 1.0)
    }

    pub fn h_prime(&self, r: f64) -> f64 {
        let g = self.gamma;
        self.scale * g / (g - 1.0) * (r.powf(g - 1.0) - 1.0)
    }

    pub fn h_second(&self, r: f64) -> f64 {
        let g = self.gamma;
        self.scale * g * r.powf(g - 2.0)
    }

    /// `H(a) - H(b) - H'(b)(a - b)`, evaluated so that it stays accurate when `a ≈ b`.
    pub fn bregman(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        if d.abs() <= 1e-4 * b {
            // third-order Taylor expansion around b
            let g = self.gamma;
            let h2 = self.h_second(b);
            let h3 = self.scale * g * (g - 2.0) * b.powf(g - 3.0);
            let h4 = self.scale * g * (g - 2.0) * (g - 3.0) * b.powf(g - 4.0);
            return d * d * (0.5 * h2 + d * (h3 / 6.0 + d * h4 / 24.0));
        }
        self.h(a) - self.h(b) - self.h_prime(b) * d
    }

    /// Squared linear sound speed `p'(1) = c γ`.
    pub fn sound_speed_sq(&self) -> f64 {
        self.scale * self.gamma
    }
}

/// Physical parameters of the capillary fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Mach number.
    pub eps: f64,
    pub nu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub normalization: HNormalization,
}

impl PhysParams {
    pub fn new(eps: f64, nu: f64, kappa: f64, gamma: f64) -> Result<Self> {
        let p = PhysParams {
            eps,
            nu,
            kappa,
            gamma,
            normalization: HNormalization::Physical,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_normalization(mut self, normalization: HNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::config("epsilon", format!("must be positive, got {}", self.eps)));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::config("nu", format!("must be nonnegative, got {}", self.nu)));
        }
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::config("kappa", format!("must be nonnegative, got {}", self.kappa)));
        }
        Eos::new(self.gamma, self.normalization).map(|_| ())
    }

    pub fn eos(&self) -> Eos {
        Eos::new(self.gamma, self.normalization).expect("validated parameters")
    }
}

fn check_positive(rho: &ScalarField, what: &str) -> Result<()> {
    let i = rho.argmin();
    let m = rho.values()[i];
    if !(m > 0.0) {
        let pos = rho.grid().position(i);
        return Err(Error::Domain(format!(
            "{what} must be positive; minimum {m:e} at grid index {i} (x = {:.4}, {:.4}, {:.4})",
            pos[0], pos[1], pos[2]
        )));
    }
    Ok(())
}

pub(crate) fn require_positive(rho: &ScalarField, what: &str) -> Result<()> {
    check_positive(rho, what)
}

/// Pointwise internal energy `H(ϱ)` with `p = ϱ^γ`.
pub fn internal_energy_h(rho: &ScalarField, gamma: f64) -> Result<ScalarField> {
    let eos = Eos::new(gamma, HNormalization::Physical)?;
    internal_energy_with(rho, &eos)
}

pub fn internal_energy_with(rho: &ScalarField, eos: &Eos) -> Result<ScalarField> {
    check_positive(rho, "density")?;
    Ok(rho.map(|r| eos.h(r)))
}

/// Pointwise pressure `ϱ^γ`.
pub fn pressure(rho: &ScalarField, gamma: f64) -> Result<ScalarField> {
    let eos = Eos::new(gamma, HNormalization::Physical)?;
    pressure_with(rho, &eos)
}

pub fn pressure_with(rho: &ScalarField, eos: &Eos) -> Result<ScalarField> {
    check_positive(rho, "density")?;
    Ok(rho.map(|r| eos.pressure(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use proptest::prelude::*;

    #[test]
    fn h_reference_values() {
        let e2 = Eos::new(2.0, HNormalization::Physical).unwrap();
        assert_eq!(e2.h(1.0), 0.0);
        assert!((e2.h(1.5) - 0.25).abs() < 1e-15);
        let e3 = Eos::new(3.0, HNormalization::Physical).unwrap();
        assert!((e3.h(2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pressure_reference_values() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let p = pressure(&ScalarField::constant(g, 1.0), 2.0).unwrap();
        assert!(p.values().iter().all(|&v| v == 1.0));
        let p = pressure(&ScalarField::constant(g, 1.5), 2.0).unwrap();
        assert!((p.values()[0] - 2.25).abs() < 1e-15);
        let p = pressure(&ScalarField::constant(g, 2.0), 1.4).unwrap();
        assert!((p.values()[0] - 2.639015821545789).abs() < 1e-9);
    }

    #[test]
    fn nonpositive_density_reports_minimum() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let mut rho = ScalarField::constant(g, 1.0);
        rho.values_mut()[5] = -0.5;
        let err = internal_energy_h(&rho, 2.0).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Domain(_)));
        assert!(msg.contains("-5e-1") && msg.contains("index 5"), "{msg}");
    }

    #[test]
    fn rejects_gamma_at_most_one() {
        assert!(PhysParams::new(0.1, 0.0, 1.0, 1.0).is_err());
        assert!(PhysParams::new(0.1, 0.0, 1.0, 0.5).is_err());
        assert!(PhysParams::new(0.0, 0.0, 1.0, 2.0).is_err());
        assert!(PhysParams::new(0.1, -1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn unit_normalization_has_unit_curvature() {
        for &g in &[1.4, 2.0, 3.0] {
            let e = Eos::new(g, HNormalization::Unit).unwrap();
            assert!((e.h_second(1.0) - 1.0).abs() < 1e-15);
            assert!((e.sound_speed_sq() - 1.0).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn h_is_convex(a in 0.05f64..5.0, b in 0.05f64..5.0, g in 1.05f64..4.0) {
            let e = Eos::new(g, HNormalization::Physical).unwrap();
            prop_assert!(e.h(a) >= -1e-15);
            prop_assert!(e.bregman(a, b) >= -1e-12 * (1.0 + e.h(a).abs()));
        }

        #[test]
        fn derivatives_match_finite_differences(r in 0.3f64..3.0, g in 1.1f64..3.5) {
            let e = Eos::new(g, HNormalization::Physical).unwrap();
            let h = 1e-5;
            let d1 = (e.h(r + h) - e.h(r - h)) / (2.0 * h);
            let d2 = (e.h_prime(r + h) - e.h_prime(r - h)) / (2.0 * h);
            prop_assert!((d1 - e.h_prime(r)).abs() < 1e-6 * (1.0 + d1.abs()));
            prop_assert!((d2 - e.h_second(r)).abs() < 1e-6 * (1.0 + d2.abs()));
        }

        #[test]
        fn pressure_and_h_are_linked(r in 0.1f64..4.0, g in 1.1f64..3.5) {
            // r H'(r) - H(r) = p(r) - p(1)
            let e = Eos::new(g, HNormalization::Unit).unwrap();
            let lhs = r * e.h_prime(r) - e.h(r);
            let rhs = e.pressure(r) - e.pressure(1.0);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn bregman_is_locally_quadratic(a in 0.5f64..2.0, b in 0.5f64..2.0, g in 1.1f64..3.5) {
            let e = Eos::new(g, HNormalization::Physical).unwrap();
            // second derivative of H on [1/2, 2] is bounded by γ max(2^{γ-2}, 2^{2-γ})
            let c = 0.5 * g * 2f64.powf((g - 2.0).abs());
            prop_assert!(e.bregman(a, b) <= c * (a - b).powi(2) + 1e-14);
        }
    }
}
