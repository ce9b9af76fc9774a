use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

/// Decay exponent `β(q) = 4/5 (1 - 3(1/2 - 1/q))` for `2 ≤ q < 6`.
pub fn beta_exponent(q: f64) -> Result<f64> {
    if !(2.0..6.0).contains(&q) {
        return Err(Error::Domain(format!("β(q) requires 2 ≤ q < 6, got {q}")));
    }
    Ok(0.8 * (1.0 - 3.0 * (0.5 - 1.0 / q)))
}

/// Planar decay exponent `β(r) = 1/2 - 1/r`.
pub fn beta_2d(r: f64) -> f64 {
    0.5 - inv(r)
}

fn inv(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Exponent pair `(p, q)`: time exponent `p`, space exponent `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissiblePair {
    pub p: f64,
    pub q: f64,
    pub dim: usize,
    /// Admissibility parameter in `1/p + θ/q = θ/2`, planar case only.
    pub theta: Option<f64>,
}

/// Verdict and derived exponents for an [`AdmissiblePair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Largest `ε`-decay exponent the estimate allows: `½(½ - 1/q)` in 3D, `s₀/3` in 2D.
    pub alpha_max: f64,
    /// Regularity order `s₀ = 3β(q)(2 - 2θ)` of the planar estimate.
    pub s0: Option<f64>,
}

impl AdmissiblePair {
    pub fn check(&self) -> Admissibility {
        admissible_check(self.p, self.q, self.dim, self.theta)
    }
}

/// Tests `(p, q)` against the Schrödinger line `2/p + 3/q = 3/2` (d = 3) or
/// against `1/p + θ/q = θ/2` with `(p, q, θ) ≠ (2, ∞, 1)` (d = 2).
pub fn admissible_check(p: f64, q: f64, d: usize, theta: Option<f64>) -> Admissibility {
    let in_range = |x: f64| x >= 2.0 && !x.is_nan();
    let ranged = in_range(p) && in_range(q);
    match d {
        3 => {
            let ok = ranged && (2.0 * inv(p) + 3.0 * inv(q) - 1.5).abs() < TOL;
            Admissibility {
                admissible: ok,
                alpha_max: 0.5 * (0.5 - inv(q)),
                s0: None,
            }
        }
        2 => {
            let th = match theta {
                Some(t) if (0.0..=1.0).contains(&t) => t,
                _ => {
                    return Admissibility {
                        admissible: false,
                        alpha_max: 0.0,
                        s0: None,
                    }
                }
            };
            let excluded = p == 2.0 && q.is_infinite() && th == 1.0;
            let ok = ranged && !excluded && (inv(p) + th * inv(q) - 0.5 * th).abs() < TOL;
            // the decay estimate is stated for 2 - 2θ ∈ [0, 1)
            let lam = 2.0 - 2.0 * th;
            let s0 = if (0.0..1.0).contains(&lam) {
                Some(3.0 * beta_2d(q) * lam)
            } else {
                None
            };
            Admissibility {
                admissible: ok,
                alpha_max: s0.map_or(0.0, |s| s / 3.0),
                s0,
            }
        }
        _ => Admissibility {
            admissible: false,
            alpha_max: 0.0,
            s0: None,
        },
    }
}

/// Time exponent `p` completing a planar pair with space exponent `q`.
pub fn planar_time_exponent(q: f64, theta: f64) -> f64 {
    1.0 / (theta * (0.5 - inv(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn beta_values() {
        assert!((beta_exponent(2.0).unwrap() - 0.8).abs() < 1e-15);
        assert!((beta_exponent(4.0).unwrap() - 0.2).abs() < 1e-15);
        assert!(beta_exponent(6.0 - 1e-9).unwrap().abs() < 1e-9);
        assert!(beta_exponent(6.0).is_err());
        assert!(beta_exponent(1.5).is_err());
    }

    #[test]
    fn three_dimensional_pairs() {
        let a = admissible_check(2.0, 6.0, 3, None);
        assert!(a.admissible);
        assert!((a.alpha_max - 1.0 / 6.0).abs() < 1e-15);
        let b = admissible_check(f64::INFINITY, 2.0, 3, None);
        assert!(b.admissible);
        assert_eq!(b.alpha_max, 0.0);
        assert!(!admissible_check(2.0, f64::INFINITY, 3, None).admissible);
    }

    #[test]
    fn planar_pairs() {
        let th = 0.85;
        let p = planar_time_exponent(6.0, th);
        let a = admissible_check(p, 6.0, 2, Some(th));
        assert!(a.admissible);
        assert!((a.s0.unwrap() - 0.3).abs() < 1e-12);
        assert!(!admissible_check(2.0, f64::INFINITY, 2, Some(1.0)).admissible);
        assert!(!admissible_check(3.0, 6.0, 2, Some(0.85)).admissible);
    }

    proptest! {
        #[test]
        fn schroedinger_line_is_admissible(t in 0.0f64..1.0) {
            // interpolate 1/q between 1/2 and 1/6
            let iq = 0.5 - t / 3.0;
            let ip = 0.75 - 1.5 * iq;
            let p = if ip == 0.0 { f64::INFINITY } else { 1.0 / ip };
            prop_assert!(admissible_check(p, 1.0 / iq, 3, None).admissible);
            prop_assert!(!admissible_check(p, 1.1 / iq, 3, None).admissible);
        }
    }
}
