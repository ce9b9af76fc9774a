use crate::acoustic::{AcousticEvolver, AcousticParams, AcousticState};
use crate::error::Result;
use crate::euler::{euler_tendency, EulerState};
use crate::field::{ScalarField, VectorField};
use crate::functionals::PhysParams;
use crate::spectral::Spectral;

use super::data::IllPrepared;

/// Test pair `r = 1 + ε s`, `U = u^E + ∇Φ` with its time derivatives.
#[derive(Debug, Clone)]
pub struct AnsatzPair {
    pub t: f64,
    pub r: ScalarField,
    pub big_u: VectorField,
    pub dr_dt: ScalarField,
    pub du_dt: VectorField,
}

/// Acoustic flow started from `(s⁰_δ, (Q u⁰)_δ)` with the coupling of the
/// linearized capillary system.
pub fn acoustic_for(sp: &Spectral, data: &IllPrepared, params: &PhysParams) -> Result<AcousticEvolver> {
    let ap = AcousticParams::linearized_from(params);
    let st = AcousticState::new(data.s0_delta.clone(), data.grad_phi0.clone(), ap)?;
    AcousticEvolver::new(sp, &st)
}

/// Builds the pair at the Euler state's time. The acoustic part and its
/// derivatives are exact; `∂_t u^E` comes from the Euler equations.
pub fn ansatz_pair(sp: &Spectral, eps: f64, euler: &EulerState, acoustic: &AcousticEvolver) -> AnsatzPair {
    let t = euler.t;
    let (s, m) = acoustic.spectra_at(t);
    let (ds, dm) = acoustic.derivatives_at(t);
    let r = sp.inverse(&s).map(|v| 1.0 + eps * v);
    let dr_dt = sp.inverse(&ds).scale(eps);
    let big_u = &euler.u + &sp.inverse_vec(&m);
    let du_dt = &euler_tendency(sp, &euler.u) + &sp.inverse_vec(&dm);
    AnsatzPair { t, r, big_u, dr_dt, du_dt }
}
