//! Ill-prepared data, the test pair built from the acoustic and Euler flows,
//! ε-sweeps and rate fitting.

pub mod ansatz;
pub mod data;
pub mod fit;
pub mod sweep;
pub mod window;

pub use ansatz::{acoustic_for, ansatz_pair, AnsatzPair};
pub use data::{
    make_ill_prepared, mollify, mollify_vec, predicted_rate, DataFamily, IllPrepared, DataRates, LqRate,
    ScalarProfile, VelocityProfile,
};
pub use fit::{fit_rate, RateFit};
pub use sweep::{run_member, run_sweep, MemberOutput, MetricFit, NuLaw, SweepConfig, SweepResult, SweepRow};
pub use window::{require_horizon, wave_escape_window, EscapeWindow};
