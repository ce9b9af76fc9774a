//! Scalar diagnostics: internal energy, energy and BD entropy, Lebesgue,
//! Sobolev and space-time norms, exponent algebra, relative energy and its budget.

pub mod admissible;
pub mod budget;
pub mod energy;
pub mod norms;
pub mod params;
pub mod relative;

pub use admissible::{admissible_check, beta_2d, beta_exponent, planar_time_exponent, AdmissiblePair, Admissibility};
pub use budget::{budget_integrands, budget_rows, rei_budget, BudgetFrame, BudgetIntegrands, BudgetRow};
pub use energy::{
    bd_entropy, bd_rates, dissipation_rate, energy_parts, orlicz_bound, total_energy, BdRates,
    EnergyParts,
};
pub use norms::{
    lebesgue_norm, lebesgue_norm_multi, sobolev_norm, sobolev_norm_multi, strichartz_norm,
    support_inequality_check, time_norm, NormSpec, SupportCheck, Window,
};
pub use params::{internal_energy_h, pressure, Eos, HNormalization, PhysParams};
pub use relative::{relative_energy, RelativeEnergy};
